#include "framekit/frames.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "framekit/error.hpp"

namespace framekit {

Frame::Frame(CMatrix synthesis) : synthesis_(std::move(synthesis)) {
  linalg::require_finite(synthesis_, "Frame");
}

Frame Frame::from_elements(const std::vector<CVector>& elements) {
  if (elements.empty()) throw Error(ErrorKind::InvalidArgument, "Frame: no elements");
  const Eigen::Index d = elements.front().size();
  CMatrix synthesis(d, static_cast<Eigen::Index>(elements.size()));
  for (std::size_t n = 0; n < elements.size(); ++n) {
    if (elements[n].size() != d) {
      throw Error(ErrorKind::DimMismatch, "Frame: elements of different length");
    }
    synthesis.col(static_cast<Eigen::Index>(n)) = elements[n];
  }
  return Frame(std::move(synthesis));
}

WeightSeq::WeightSeq(CVector values) : values_(std::move(values)) {
  if (values_.size() < 1) throw Error(ErrorKind::InvalidArgument, "WeightSeq: empty");
  if (!values_.allFinite()) throw Error(ErrorKind::NonFinite, "WeightSeq: NaN or Inf entry");
}

WeightSeq WeightSeq::real(const RVector& values) { return WeightSeq(values.cast<Complex>()); }

WeightSeq WeightSeq::constant(std::size_t size, Complex value) {
  return WeightSeq(CVector::Constant(static_cast<Eigen::Index>(size), value));
}

WeightSeq WeightSeq::reciprocal() const { return WeightSeq(values_.cwiseInverse()); }

WeightSeq WeightSeq::conjugate_reciprocal() const {
  return WeightSeq(values_.conjugate().cwiseInverse());
}

namespace {

// X X^* assembled from one triangle, so the result is Hermitian bit for bit.
CMatrix outer_gram(const CMatrix& x) {
  CMatrix lower = CMatrix::Zero(x.rows(), x.rows());
  lower.selfadjointView<Eigen::Lower>().rankUpdate(x);
  CMatrix full = lower.selfadjointView<Eigen::Lower>();
  full.diagonal() = full.diagonal().real().cast<Complex>();
  return full;
}

}  // namespace

CMatrix gram(const Frame& frame) { return outer_gram(frame.synthesis().adjoint()); }

CMatrix frame_operator(const Frame& frame) { return outer_gram(frame.synthesis()); }

FrameBounds optimal_bounds(const Frame& frame, double tol) {
  const RVector lambda = linalg::hermitian_eigenvalues(frame_operator(frame), tol);
  FrameBounds bounds;
  // PSD by construction; rounding may push the smallest eigenvalue a hair below zero.
  bounds.lower = std::max(lambda(0), 0.0);
  bounds.upper = std::max(lambda(lambda.size() - 1), 0.0);
  bounds.optimal = true;
  bounds.is_frame = bounds.upper > 0.0 && bounds.lower > tol * bounds.upper;
  return bounds;
}

Frame canonical_dual(const Frame& frame, double tol) {
  const FrameBounds bounds = optimal_bounds(frame, tol);
  if (!bounds.is_frame) {
    std::ostringstream os;
    os << "canonical_dual: lower bound " << bounds.lower << " vs upper " << bounds.upper;
    throw Error(ErrorKind::NotAFrame, os.str());
  }
  return Frame(linalg::solve_hpd(frame_operator(frame), frame.synthesis(), tol));
}

Frame apply_weights(const Frame& frame, const WeightSeq& weights) {
  if (weights.size() != frame.count()) {
    std::ostringstream os;
    os << "apply_weights: " << weights.size() << " weights for " << frame.count() << " elements";
    throw Error(ErrorKind::LengthMismatch, os.str());
  }
  return Frame(frame.synthesis() * weights.values().asDiagonal());
}

std::optional<SemiNormalizedBounds> check_semi_normalized(const WeightSeq& weights, double tol) {
  const RVector moduli = weights.values().cwiseAbs();
  SemiNormalizedBounds bounds{moduli.minCoeff(), moduli.maxCoeff()};
  if (bounds.a <= tol) return std::nullopt;
  return bounds;
}

CMatrix multiplier(const CVector& symbol, const Frame& analysis, const Frame& synthesis) {
  if (analysis.dim() != synthesis.dim()) {
    throw Error(ErrorKind::DimMismatch, "multiplier: frames live in different spaces");
  }
  if (static_cast<std::size_t>(symbol.size()) != analysis.count() ||
      analysis.count() != synthesis.count()) {
    throw Error(ErrorKind::LengthMismatch, "multiplier: symbol and frame lengths differ");
  }
  return synthesis.synthesis() * symbol.asDiagonal() * analysis.synthesis().adjoint();
}

CMatrix multiplier(const RVector& symbol, const Frame& analysis, const Frame& synthesis) {
  return multiplier(CVector(symbol.cast<Complex>()), analysis, synthesis);
}

DualCheck check_dual_pair(const Frame& psi, const Frame& phi, double tol) {
  if (psi.dim() != phi.dim()) throw Error(ErrorKind::DimMismatch, "check_dual_pair: dimensions differ");
  if (psi.count() != phi.count()) {
    throw Error(ErrorKind::DimMismatch, "check_dual_pair: element counts differ");
  }
  const auto d = static_cast<Eigen::Index>(psi.dim());
  const CMatrix defect = phi.synthesis() * psi.synthesis().adjoint() - CMatrix::Identity(d, d);
  DualCheck check;
  check.residual = linalg::spectral_norm(defect);
  check.is_dual = check.residual <= tol;
  return check;
}

double condition_number(const Frame& frame, double tol) {
  const FrameBounds bounds = optimal_bounds(frame, tol);
  if (!bounds.is_frame) throw Error(ErrorKind::NotAFrame, "condition_number: not a frame");
  return bounds.upper / bounds.lower;
}

}  // namespace framekit
