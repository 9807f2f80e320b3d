#include "framekit/controlled.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "framekit/error.hpp"

namespace framekit {

namespace {

void require_same_dim(const Frame& frame, const Controller& c, const char* what) {
  if (c.dim() != frame.dim()) {
    std::ostringstream os;
    os << what << ": controller is " << c.dim() << "x" << c.dim() << " but frame lives in C^"
       << frame.dim();
    throw Error(ErrorKind::DimMismatch, os.str());
  }
}

OperatorBounds hermitian_part_extremes(const CMatrix& a) {
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  const RVector& lambda = solver.eigenvalues();
  return {lambda(0), lambda(lambda.size() - 1)};
}

double relaxation_rate(const OperatorBounds& b) { return (b.upper - b.lower) / (b.upper + b.lower); }

void require_positive(const OperatorBounds& b, const char* name) {
  if (!(b.lower > 0.0) || !(b.upper >= b.lower) || !std::isfinite(b.upper)) {
    std::ostringstream os;
    os << "bound_arithmetic: " << name << " bounds (" << b.lower << ", " << b.upper
       << ") must satisfy 0 < lower <= upper";
    throw Error(ErrorKind::NonPositiveInput, os.str());
  }
}

}  // namespace

Controller::Controller(CMatrix matrix, double tol) : matrix_(std::move(matrix)), tol_(tol) {
  linalg::require_finite(matrix_, "Controller");
  if (matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorKind::DimMismatch, "Controller: matrix must be square");
  }
  Eigen::BDCSVD<CMatrix> svd(matrix_);
  const RVector& sigma = svd.singularValues();
  if (!(sigma(sigma.size() - 1) > tol_ * sigma(0))) {
    std::ostringstream os;
    os << "Controller: singular values span [" << sigma(sigma.size() - 1) << ", " << sigma(0) << "]";
    throw Error(ErrorKind::NotInvertible, os.str());
  }
}

Controller Controller::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return Controller(CMatrix::Identity(d, d));
}

Controller Controller::inverse_frame_operator(const Frame& frame, double tol) {
  if (!optimal_bounds(frame, tol).is_frame) {
    throw Error(ErrorKind::NotAFrame, "inverse_frame_operator: frame operator is singular");
  }
  const auto d = static_cast<Eigen::Index>(frame.dim());
  return Controller(linalg::solve_hpd(frame_operator(frame), CMatrix(CMatrix::Identity(d, d)), tol), tol);
}

CMatrix controlled_frame_operator(const Frame& frame, const Controller& c) {
  require_same_dim(frame, c, "controlled_frame_operator");
  return c.matrix() * frame_operator(frame);
}

ControlledCheck check_controlled(const Frame& frame, const Controller& c, double tol) {
  require_same_dim(frame, c, "check_controlled");
  const CMatrix l = frame_operator(frame);
  const CMatrix cl = c.matrix() * l;
  ControlledCheck check;
  const double scale = cl.norm();
  if (scale == 0.0) return check;
  check.hermiticity_residual = (cl - cl.adjoint()).norm() / scale;
  check.commutation_residual = (cl - l * c.matrix().adjoint()).norm() / scale;
  const OperatorBounds b = hermitian_part_extremes(cl);
  check.lower = b.lower;
  check.upper = b.upper;
  const double spectral = std::max(std::abs(b.lower), std::abs(b.upper));
  check.is_controlled = check.hermiticity_residual <= tol && b.lower > tol * spectral;
  return check;
}

DiagonalController diagonal_controller(const Frame& frame, const RVector& w, double tol) {
  if (static_cast<std::size_t>(w.size()) != frame.count()) {
    throw Error(ErrorKind::LengthMismatch, "diagonal_controller: one weight per element required");
  }
  if (!w.allFinite() || !(w.minCoeff() > tol)) {
    throw Error(ErrorKind::NotSemiNormalized,
                "diagonal_controller: weights must be positive and bounded away from zero");
  }
  const Frame dual = canonical_dual(frame, tol);
  CMatrix c = multiplier(w, dual, frame);

  double residual = 0.0;
  for (std::size_t n = 0; n < frame.count(); ++n) {
    const double norm = frame.element(n).norm();
    if (norm == 0.0) continue;
    const CVector defect = c * frame.element(n) - w(static_cast<Eigen::Index>(n)) * frame.element(n);
    residual = std::max(residual, defect.norm() / norm);
  }
  return {Controller(std::move(c), tol), residual};
}

OperatorBounds bound_arithmetic(BoundClause clause, const OperatorBounds& first,
                                const OperatorBounds& second) {
  switch (clause) {
    case BoundClause::FrameOperator:
      require_positive(first, "CL");
      require_positive(second, "C");
      return {first.lower / second.upper, first.upper / second.lower};
    case BoundClause::Controller:
      require_positive(first, "CL");
      require_positive(second, "L");
      return {first.lower / second.upper, first.upper / second.lower};
    case BoundClause::ControlledOperator:
      require_positive(first, "L");
      require_positive(second, "C");
      return {first.lower * second.lower, first.upper * second.upper};
  }
  throw Error(ErrorKind::InvalidArgument, "bound_arithmetic: unknown clause");
}

NeumannResult neumann_invert(const CMatrix& a, std::size_t max_iters, double tol) {
  linalg::require_finite(a, "neumann_invert");
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimMismatch, "neumann_invert: square input required");
  const auto d = a.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix step = id - a;

  NeumannResult result;
  result.report.predicted_rate = linalg::spectral_norm(step);
  if (result.report.predicted_rate >= 1.0) {
    std::ostringstream os;
    os << "neumann_invert: ||I - A|| = " << result.report.predicted_rate << " >= 1";
    throw Error(ErrorKind::NotContractive, os.str());
  }

  CMatrix sum = id;
  CMatrix power = id;
  auto& history = result.report.residual_history;
  history.push_back(linalg::spectral_norm(a * sum - id));
  std::size_t k = 0;
  while (history.back() > tol && k < max_iters) {
    power = power * step;
    sum += power;
    ++k;
    history.push_back(linalg::spectral_norm(a * sum - id));
  }
  result.report.iterations = k;
  if (k > 0 && history.front() > 0.0) {
    result.report.achieved_rate = std::pow(history.back() / history.front(), 1.0 / static_cast<double>(k));
  }
  result.inverse = std::move(sum);
  return result;
}

FrameAlgorithmResult frame_algorithm(const Frame& frame, const CVector& f,
                                     const std::optional<Controller>& c, std::size_t max_iters,
                                     double tol) {
  if (static_cast<std::size_t>(f.size()) != frame.dim()) {
    throw Error(ErrorKind::DimMismatch, "frame_algorithm: signal length differs from frame dimension");
  }
  if (max_iters == 0) throw Error(ErrorKind::InvalidArgument, "frame_algorithm: max_iters must be >= 1");

  CMatrix a;
  OperatorBounds bounds;
  if (c) {
    const ControlledCheck check = check_controlled(frame, *c, tol);
    if (!check.is_controlled) {
      throw Error(ErrorKind::NotControlled, "frame_algorithm: C L is not positive and invertible");
    }
    a = controlled_frame_operator(frame, *c);
    bounds = {check.lower, check.upper};
  } else {
    const FrameBounds fb = optimal_bounds(frame, tol);
    if (!fb.is_frame) throw Error(ErrorKind::NotAFrame, "frame_algorithm: not a frame");
    a = frame_operator(frame);
    bounds = {fb.lower, fb.upper};
  }

  const double relax = 2.0 / (bounds.lower + bounds.upper);
  const CVector data = a * f;
  const double f_norm = f.norm();

  FrameAlgorithmResult result;
  result.report.predicted_rate = relaxation_rate(bounds);
  auto& history = result.report.residual_history;
  CVector g = CVector::Zero(f.size());
  history.push_back(f_norm);
  std::size_t k = 0;
  while (k < max_iters) {
    g += relax * (data - a * g);
    ++k;
    history.push_back((f - g).norm());
    if (history.back() <= tol * f_norm) break;
  }
  result.report.iterations = k;
  if (f_norm > 0.0) {
    result.report.achieved_rate = std::pow(history.back() / f_norm, 1.0 / static_cast<double>(k));
  }
  result.first_step_within_bound =
      history[1] <= result.report.predicted_rate * f_norm + tol * f_norm;
  result.reconstruction = std::move(g);
  return result;
}

PreconditionReport precondition_report(const Frame& frame, const Controller& c, double tol) {
  const ControlledCheck check = check_controlled(frame, c, tol);
  if (!check.is_controlled) {
    throw Error(ErrorKind::NotControlled, "precondition_report: C L is not positive and invertible");
  }
  // Both operators go through the same spectral routine so C = I reproduces
  // the plain numbers bit for bit.
  const OperatorBounds plain = hermitian_part_extremes(frame_operator(frame));
  const OperatorBounds controlled{check.lower, check.upper};
  PreconditionReport report;
  report.kappa_plain = plain.upper / plain.lower;
  report.kappa_controlled = controlled.upper / controlled.lower;
  report.delta_plain = relaxation_rate(plain);
  report.delta_controlled = relaxation_rate(controlled);
  report.improved = report.kappa_controlled < report.kappa_plain;
  return report;
}

}  // namespace framekit
