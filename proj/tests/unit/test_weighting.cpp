#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "framekit/weighting.hpp"
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

RVector moduli(const WeightSeq& w) { return w.values().cwiseAbs(); }

// Smallest ||sum_k s_k psi_k psi_k^* - I||_F over real symbols s, by a dense
// least-squares solve over the vectorised rank-one operators.
double least_squares_symbol_residual(const Frame& f) {
  const auto d = static_cast<Eigen::Index>(f.dim());
  const auto m = static_cast<Eigen::Index>(f.count());
  RMatrix a(2 * d * d, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const CMatrix outer = f.synthesis().col(k) * f.synthesis().col(k).adjoint();
    const CVector v = outer.reshaped();
    a.col(k) << v.real(), v.imag();
  }
  const CVector id = CMatrix(CMatrix::Identity(d, d)).reshaped();
  RVector rhs(2 * d * d);
  rhs << id.real(), id.imag();
  const RVector s = a.colPivHouseholderQr().solve(rhs);
  return (a * s - rhs).norm();
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (WeightMethod m : kAllWeightMethods) CHECK(parse_weight_method(to_string(m)) == m);
  CHECK(kind_of([] { parse_weight_method("p3"); }) == ErrorKind::UnknownKind);
}

TEST_CASE("weights of the Parseval triangle") {
  // |<psi_n, psi_k>| is 2/3 on the diagonal and 1/3 elsewhere.
  const Frame f = parseval_triangle();
  const double norm = std::sqrt(2.0 / 3.0);
  const double p4 = norm / std::pow(std::pow(2.0 / 3, 4) + 2 * std::pow(1.0 / 3, 4), 0.25);
  CHECK((moduli(weight_lp(f, 2)) - RVector::Ones(3)).norm() <= 1e-14);
  CHECK((moduli(weight_lp(f, 4)) - p4 * RVector::Ones(3)).norm() <= 1e-14);
  CHECK(p4 == doctest::Approx(std::pow(2.0, 0.25)));
  CHECK((moduli(weight_linf(f)) - std::sqrt(1.5) * RVector::Ones(3)).norm() <= 1e-14);
  CHECK((moduli(weight_multiplier(f)) - RVector::Ones(3)).norm() <= 1e-14);
}

TEST_CASE("weights of a duplicated orthonormal basis") {
  CMatrix phi(2, 4);
  phi << 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0;
  const Frame f(phi);
  const RVector half = RVector::Constant(4, 1 / std::sqrt(2.0));
  CHECK((moduli(weight_lp(f, 2)) - half).norm() <= 1e-14);
  CHECK((moduli(weight_linf(f)) - RVector::Ones(4)).norm() <= 1e-14);
  CHECK((moduli(weight_multiplier(f)) - half).norm() <= 1e-14);
}

TEST_CASE("every method normalises an orthogonal basis") {
  std::mt19937_64 rng(51);
  const CMatrix q = random_matrix(5, 5, rng).householderQr().householderQ();
  const RVector norms = random_positive(5, 0.1, 10.0, rng);
  const Frame f(q * norms.cast<Complex>().asDiagonal());
  for (WeightMethod m : kAllWeightMethods) {
    const WeightSeq w = compute_weights(f, m);
    CHECK((moduli(w) - norms.cwiseInverse()).norm() <= 1e-12 * norms.cwiseInverse().norm());
    CHECK(condition_number(apply_weights(f, w)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("weights scale inversely with the frame") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const Frame f(random_matrix(4, 7, rng));
    for (double c : {1e-3, 0.5, 7.0, 1e4}) {
      const Frame scaled(c * f.synthesis());
      for (WeightMethod m : kAllWeightMethods) {
        WeightSeq w = WeightSeq::constant(1, 1.0), ws = w;
        try {
          w = compute_weights(f, m);
          ws = compute_weights(scaled, m);
        } catch (const Error& e) {
          CHECK(e.kind() == ErrorKind::NegativeRadicand);
          continue;
        }
        CHECK((c * ws.values() - w.values()).norm() <= 1e-10 * w.values().norm());
        CHECK(rel_diff(apply_weights(scaled, ws).synthesis(), apply_weights(f, w).synthesis()) <= 1e-10);
        CHECK(condition_number(apply_weights(scaled, ws)) ==
              doctest::Approx(condition_number(apply_weights(f, w))).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("weights follow a permutation of the elements") {
  std::mt19937_64 rng(53);
  const Frame f(random_matrix(3, 8, rng));
  std::vector<int> order(8);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  CMatrix permuted(3, 8);
  for (int k = 0; k < 8; ++k) permuted.col(k) = f.synthesis().col(order[k]);
  const Frame g(permuted);
  for (WeightMethod m : {WeightMethod::P2, WeightMethod::P4, WeightMethod::P6, WeightMethod::PInf}) {
    const WeightSeq w = compute_weights(f, m);
    const WeightSeq wp = compute_weights(g, m);
    for (int k = 0; k < 8; ++k) {
      CHECK(std::abs(wp[k] - w[order[k]]) <= 1e-12 * std::abs(w[order[k]]));
    }
  }
}

TEST_CASE("multiplier weights minimise the distance to the identity") {
  std::mt19937_64 rng(54);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    const Frame f(random_matrix(d, d + 1 + trial % 4, rng));
    WeightSeq w = WeightSeq::constant(1, 1.0);
    try {
      w = weight_multiplier(f);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NegativeRadicand);
      continue;
    }
    ++checked;
    const CMatrix id = CMatrix::Identity(d, d);
    const double ours = (multiplier(w.energies(), f, f) - id).norm();
    CHECK(ours == doctest::Approx(least_squares_symbol_residual(f)).epsilon(1e-8));
  }
  CHECK(checked >= 5);
}

TEST_CASE("weights reject zero elements and bad exponents") {
  CMatrix phi = CMatrix::Identity(2, 3);
  const Frame f(phi);  // third column is zero
  CHECK(kind_of([&] { weight_lp(f, 2); }) == ErrorKind::ZeroElement);
  CHECK(kind_of([&] { weight_linf(f); }) == ErrorKind::ZeroElement);
  CHECK(kind_of([&] { weight_multiplier(f); }) == ErrorKind::ZeroElement);
  CHECK(kind_of([] { weight_lp(Frame(CMatrix::Identity(2, 2)), 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("larger exponents approach the sup weights") {
  std::mt19937_64 rng(55);
  const Frame f(random_matrix(4, 9, rng));
  const RVector inf = moduli(weight_linf(f));
  const RVector big = moduli(weight_lp(f, 400));
  CHECK((big - inf).norm() <= 0.02 * inf.norm());
  // ||.||_p is non-increasing in p, so the weights are non-decreasing.
  const RVector p2 = moduli(weight_lp(f, 2)), p4 = moduli(weight_lp(f, 4)), p6 = moduli(weight_lp(f, 6));
  for (Eigen::Index n = 0; n < p2.size(); ++n) {
    CHECK(p2(n) <= p4(n) * (1 + 1e-14));
    CHECK(p4(n) <= p6(n) * (1 + 1e-14));
    CHECK(p6(n) <= inf(n) * (1 + 1e-14));
  }
}

TEST_CASE("random frames are seeded, complex and spanning") {
  const Frame a = random_frame(6, 10, 99);
  const Frame b = random_frame(6, 10, 99);
  const Frame c = random_frame(6, 10, 100);
  CHECK(a.synthesis() == b.synthesis());
  CHECK(a.synthesis() != c.synthesis());
  CHECK(optimal_bounds(a).is_frame);
  CHECK(a.synthesis().imag().norm() > 0.0);
  CHECK(kind_of([] { random_frame(4, 4, 1); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { random_frame(0, 4, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("trial outcome bookkeeping") {
  const Frame f = random_frame(4, 9, 7);
  const std::vector<WeightMethod> methods{WeightMethod::Mult, WeightMethod::P2, WeightMethod::PInf};
  const TrialOutcome o = evaluate_trial(f, methods);
  REQUIRE(o.kappa_weighted.size() == 3);
  CHECK(o.kappa_plain == doctest::Approx(condition_number(f)));
  // methods are reported in canonical order p2, pinf, mult
  CHECK(o.kappa_weighted[0].value() ==
        doctest::Approx(condition_number(apply_weights(f, weight_lp(f, 2)))));
  if (o.best) {
    CHECK(o.improved[*o.best]);
    for (std::size_t i = 0; i < 3; ++i) {
      if (o.improved[i]) CHECK(*o.kappa_weighted[*o.best] <= *o.kappa_weighted[i]);
    }
  }
}

TEST_CASE("tightening report invariants and schedule independence") {
  TighteningConfig config;
  config.dim = 5;
  config.count = 9;
  config.trials = 40;
  config.seed = 2024;
  config.threads = 1;
  const TighteningReport one = tightening_experiment(config);
  config.threads = 3;
  const TighteningReport three = tightening_experiment(config);
  std::ostringstream a, b;
  write_csv(a, one);
  write_csv(b, three);
  CHECK(a.str() == b.str());

  std::size_t best_total = 0;
  for (const MethodTally& t : one.methods) {
    CHECK(t.best <= t.improved);
    CHECK(t.improved + t.failed <= one.trials);
    best_total += t.best;
  }
  CHECK(best_total == one.overall_improved);
  CHECK(one.overall_improved <= one.trials);
  CHECK(one.overall_fraction() == doctest::Approx(static_cast<double>(one.overall_improved) / 40));
}

TEST_CASE("tightening report CSV layout") {
  TighteningConfig config;
  config.dim = 3;
  config.count = 4;
  config.trials = 100;
  config.seed = 5;
  config.methods = {WeightMethod::P2};
  const TighteningReport r = tightening_experiment(config);
  std::ostringstream os;
  write_csv(os, r);
  std::istringstream lines(os.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "method,improved,best,trials,dim,count,seed");
  std::getline(lines, line);
  CHECK(line.rfind("p2,", 0) == 0);
  CHECK(line.find(",100,3,4,5") != std::string::npos);
  std::getline(lines, line);
  CHECK(line.rfind("__overall__,", 0) == 0);
}

TEST_CASE("tightening configuration errors") {
  TighteningConfig config;
  config.dim = 3;
  config.count = 3;
  config.trials = 1;
  CHECK(kind_of([&] { tightening_experiment(config); }) == ErrorKind::InvalidArgument);
  config.count = 4;
  config.trials = 0;
  CHECK(kind_of([&] { tightening_experiment(config); }) == ErrorKind::InvalidArgument);
  config.trials = 1;
  config.methods.clear();
  CHECK(kind_of([&] { tightening_experiment(config); }) == ErrorKind::InvalidArgument);
}
