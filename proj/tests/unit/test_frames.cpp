#include <doctest.h>

#include <cmath>

#include "framekit/frames.hpp"
#include "support.hpp"

using namespace framekit;
using namespace testing_support;

namespace {

Frame parseval_triangle() {
  CMatrix phi(2, 3);
  phi << 2 / std::sqrt(6.0), -1 / std::sqrt(6.0), -1 / std::sqrt(6.0),
         0.0, 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  return Frame(phi);
}

WeightSeq triangle_weights() { return WeightSeq::real((RVector(3) << 0.5, 1.0, 2.0).finished()); }

Frame random_test_frame(std::mt19937_64& rng, Eigen::Index d, Eigen::Index m) {
  return Frame(random_matrix(d, m, rng));
}

}  // namespace

TEST_CASE("Gram matrix entries are pairwise inner products") {
  CMatrix phi(2, 3);
  phi << 1.0, 1.0, 0.0, Complex(0, 1), 0.0, 2.0;
  const CMatrix g = gram(Frame(phi));
  // G(k,l) = psi_k^* psi_l
  CHECK(g(0, 0) == Complex(2, 0));
  CHECK(g(1, 1) == Complex(1, 0));
  CHECK(g(2, 2) == Complex(4, 0));
  CHECK(g(0, 1) == Complex(1, 0));
  CHECK(g(0, 2) == Complex(0, -2));
  CHECK(g(2, 0) == Complex(0, 2));
  CHECK(g(1, 2) == Complex(0, 0));
}

TEST_CASE("frame operator of the Parseval triangle is the identity") {
  const Frame f = parseval_triangle();
  CHECK((frame_operator(f) - CMatrix::Identity(2, 2)).norm() <= 1e-15);
  const FrameBounds b = optimal_bounds(f);
  CHECK(b.is_frame);
  CHECK(b.optimal);
  CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weighted triangle: frame operator, bounds and condition number") {
  const Frame w = apply_weights(parseval_triangle(), triangle_weights());
  CMatrix expected(2, 2);
  expected << 1.0, std::sqrt(3.0) / 2, std::sqrt(3.0) / 2, 2.5;
  CHECK((frame_operator(w) - expected).norm() <= 1e-14);
  // trace 7/2, determinant 5/2 - 3/4
  const double tr = 3.5, det = 1.75;
  const double lo = (tr - std::sqrt(tr * tr - 4 * det)) / 2;
  const double hi = (tr + std::sqrt(tr * tr - 4 * det)) / 2;
  const FrameBounds b = optimal_bounds(w);
  CHECK(b.lower == doctest::Approx(lo).epsilon(1e-13));
  CHECK(b.upper == doctest::Approx(hi).epsilon(1e-13));
  CHECK(condition_number(w) == doctest::Approx(hi / lo).epsilon(1e-13));
}

TEST_CASE("weighted canonical dual and inversely weighted dual are both duals but differ") {
  const Frame psi = parseval_triangle();
  const WeightSeq omega = triangle_weights();
  const Frame weighted = apply_weights(psi, omega);
  const Frame dwg = canonical_dual(weighted);
  const Frame iwd = apply_weights(canonical_dual(psi), omega.reciprocal());
  CHECK(check_dual_pair(dwg, weighted).is_dual);
  CHECK(check_dual_pair(iwd, weighted).is_dual);
  CHECK(check_dual_pair(iwd, weighted).residual <= 1e-14);
  CHECK((dwg.synthesis() - iwd.synthesis()).cwiseAbs().maxCoeff() > 0.01);
}

TEST_CASE("frame operator is Hermitian PSD and PD exactly for frames") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 6;
    const bool deficient = trial % 3 == 0;
    const CMatrix phi = deficient ? random_low_rank(d, 2 * d, d - 1, rng) : random_matrix(d, 2 * d, rng);
    const Frame f(phi);
    const CMatrix l = frame_operator(f);
    CHECK(linalg::hermiticity_defect(l) == 0.0);
    const RVector lambda = linalg::hermitian_eigenvalues(l);
    CHECK(lambda(0) >= -1e-12 * lambda(lambda.size() - 1));
    CHECK(optimal_bounds(f).is_frame == !deficient);
    CHECK(linalg::is_positive_definite(l) == !deficient);
  }
}

TEST_CASE("fewer elements than the dimension is representable but not a frame") {
  std::mt19937_64 rng(22);
  const Frame f(random_matrix(4, 3, rng));
  CHECK_FALSE(optimal_bounds(f).is_frame);
  CHECK(kind_of([&] { canonical_dual(f); }) == ErrorKind::NotAFrame);
  CHECK(kind_of([&] { condition_number(f); }) == ErrorKind::NotAFrame);
}

TEST_CASE("frame status does not depend on global scaling") {
  std::mt19937_64 rng(23);
  const CMatrix phi = random_matrix(5, 9, rng);
  for (double c : {1e-8, 1e-3, 1.0, 1e4, 1e9}) {
    CHECK(optimal_bounds(Frame(c * phi)).is_frame);
    CHECK_FALSE(optimal_bounds(Frame(c * random_low_rank(5, 9, 4, rng))).is_frame);
  }
}

TEST_CASE("canonical dual has the reciprocal bounds") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 1 + trial % 16;
    const Frame f = random_test_frame(rng, d, d + 1 + (trial * 7) % (48 - d));
    const FrameBounds b = optimal_bounds(f);
    const FrameBounds bd = optimal_bounds(canonical_dual(f));
    CHECK(bd.lower == doctest::Approx(1.0 / b.upper).epsilon(1e-10));
    CHECK(bd.upper == doctest::Approx(1.0 / b.lower).epsilon(1e-10));
  }
}

TEST_CASE("reconstruction through the canonical dual in both orders") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 2 + trial;
    const Frame f = random_test_frame(rng, d, 2 * d + 1);
    const Frame dual = canonical_dual(f);
    const CVector x = random_matrix(d, 1, rng).col(0);
    const CVector analysis_dual = dual.synthesis().adjoint() * x;
    const CVector analysis_frame = f.synthesis().adjoint() * x;
    CHECK((f.synthesis() * analysis_dual - x).norm() <= 1e-10 * x.norm());
    CHECK((dual.synthesis() * analysis_frame - x).norm() <= 1e-10 * x.norm());
    CHECK(check_dual_pair(f, dual).is_dual);
  }
}

TEST_CASE("weighting keeps frame bounds within the squared weight bounds") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 1 + trial % 16;
    const Frame f = random_test_frame(rng, d, d + 1 + trial % 9);
    const RVector mod = random_positive(static_cast<Eigen::Index>(f.count()), 0.2, 3.0, rng);
    CVector omega(mod.size());
    std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
    for (Eigen::Index i = 0; i < mod.size(); ++i) omega(i) = std::polar(mod(i), phase(rng));
    const WeightSeq w(omega);
    const auto sn = check_semi_normalized(w);
    REQUIRE(sn.has_value());
    CHECK(sn->a == doctest::Approx(mod.minCoeff()));
    CHECK(sn->b == doctest::Approx(mod.maxCoeff()));
    const FrameBounds b = optimal_bounds(f);
    const Frame weighted = apply_weights(f, w);
    const FrameBounds bw = optimal_bounds(weighted);
    CHECK(bw.lower >= sn->a * sn->a * b.lower * (1 - 1e-10));
    CHECK(bw.upper <= sn->b * sn->b * b.upper * (1 + 1e-10));
    const Frame inverse_weighted_dual = apply_weights(canonical_dual(f), w.conjugate_reciprocal());
    CHECK(check_dual_pair(inverse_weighted_dual, weighted).residual <= 1e-8);
  }
}

TEST_CASE("complex weights need the conjugate reciprocal on the dual side") {
  std::mt19937_64 rng(29);
  const Frame f(random_matrix(3, 6, rng));
  CVector omega(6);
  for (int i = 0; i < 6; ++i) omega(i) = std::polar(1.0 + 0.2 * i, 0.4 + i);
  const WeightSeq w(omega);
  const Frame weighted = apply_weights(f, w);
  const Frame dual = canonical_dual(f);
  CHECK(check_dual_pair(apply_weights(dual, w.conjugate_reciprocal()), weighted).residual <= 1e-12);
  CHECK(check_dual_pair(apply_weights(dual, w.reciprocal()), weighted).residual > 0.1);
  // For real weights the two coincide.
  const WeightSeq real = WeightSeq::real((RVector(3) << -2.0, 0.5, 3.0).finished());
  CHECK(real.reciprocal().values() == real.conjugate_reciprocal().values());
}

TEST_CASE("semi-normalization fails on a zero weight") {
  const WeightSeq w = WeightSeq::real((RVector(3) << 1.0, 0.0, 2.0).finished());
  CHECK_FALSE(check_semi_normalized(w).has_value());
}

TEST_CASE("positive multiplier equals the frame operator of root-weighted elements") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    const Frame f = random_test_frame(rng, d, d + 3);
    const RVector m = random_positive(static_cast<Eigen::Index>(f.count()), 0.1, 4.0, rng);
    const CMatrix mult = multiplier(m, f, f);
    const CMatrix factored = frame_operator(apply_weights(f, WeightSeq::real(m.cwiseSqrt())));
    CHECK(rel_diff(mult, factored) <= 1e-12);
  }
}

TEST_CASE("frame status, multiplier invertibility and weighted frame status agree") {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 2 + trial % 6;
    const Eigen::Index m = d + trial % 5;
    const bool deficient = trial % 2 == 1;
    const Frame f(deficient ? random_low_rank(d, m, d - 1, rng) : random_matrix(d, m, rng));
    const RVector w = random_positive(m, 0.3, 3.0, rng);
    const bool frame = optimal_bounds(f).is_frame;
    const bool mult_pd = linalg::is_positive_definite(multiplier(w, f, f));
    const bool root_frame = optimal_bounds(apply_weights(f, WeightSeq::real(w.cwiseSqrt()))).is_frame;
    const bool w_frame = optimal_bounds(apply_weights(f, WeightSeq::real(w))).is_frame;
    CHECK(frame == !deficient);
    CHECK(mult_pd == frame);
    CHECK(root_frame == frame);
    CHECK(w_frame == frame);
  }
}

TEST_CASE("construction errors") {
  CHECK(kind_of([] { Frame::from_elements({}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { Frame::from_elements({CVector::Ones(2), CVector::Ones(3)}); }) ==
        ErrorKind::DimMismatch);
  CMatrix bad = CMatrix::Ones(2, 2);
  bad(1, 0) = std::numeric_limits<double>::infinity();
  CHECK(kind_of([&] { Frame f(bad); }) == ErrorKind::NonFinite);
  CHECK(kind_of([] { apply_weights(Frame(CMatrix::Identity(2, 2)), WeightSeq::constant(3, 1.0)); }) ==
        ErrorKind::LengthMismatch);
  CHECK(kind_of([] { WeightSeq w(CVector(0)); }) == ErrorKind::InvalidArgument);
  const Frame a(CMatrix::Identity(2, 2));
  const Frame b(CMatrix::Identity(3, 3));
  CHECK(kind_of([&] { check_dual_pair(a, b); }) == ErrorKind::DimMismatch);
  CHECK(kind_of([&] { multiplier(RVector(RVector::Ones(3)), a, a); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("from_elements stacks columns in order") {
  const CVector e1 = (CVector(2) << 1.0, 0.0).finished();
  const CVector e2 = (CVector(2) << Complex(0, 1), 2.0).finished();
  const Frame f = Frame::from_elements({e1, e2});
  CHECK(f.dim() == 2);
  CHECK(f.count() == 2);
  CHECK(f.element(1)(0) == Complex(0, 1));
}
