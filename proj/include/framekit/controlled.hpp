#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "framekit/frames.hpp"

namespace framekit {

/// An invertible d x d operator used to precondition a frame operator.
class Controller {
 public:
  /// Throws NotInvertible unless sigma_min > tol * sigma_max.
  explicit Controller(CMatrix matrix, double tol = kDefaultTol);

  static Controller identity(std::size_t dim);
  /// C = L^{-1}, the controller that turns L_C into the identity.
  static Controller inverse_frame_operator(const Frame& frame, double tol = kDefaultTol);

  const CMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  double tol() const noexcept { return tol_; }

 private:
  CMatrix matrix_;
  double tol_;
};

struct ControlledCheck {
  bool is_controlled = false;
  /// Extreme eigenvalues of the Hermitian part of CL; optimal controlled
  /// bounds when is_controlled.
  double lower = 0.0;
  double upper = 0.0;
  /// ||CL - (CL)^*||_F / ||CL||_F
  double hermiticity_residual = 0.0;
  /// ||CL - L C^*||_F / ||CL||_F
  double commutation_residual = 0.0;
};

struct IterationReport {
  std::size_t iterations = 0;
  std::vector<double> residual_history;
  double predicted_rate = 0.0;
  double achieved_rate = 0.0;
};

struct NeumannResult {
  CMatrix inverse;
  IterationReport report;
};

struct FrameAlgorithmResult {
  CVector reconstruction;
  IterationReport report;
  /// ||f - g_1|| <= delta ||f|| + tol ||f||
  bool first_step_within_bound = false;
};

struct PreconditionReport {
  double kappa_plain = 0.0;
  double kappa_controlled = 0.0;
  double delta_plain = 0.0;
  double delta_controlled = 0.0;
  bool improved = false;
};

struct DiagonalController {
  Controller controller;
  /// max_n ||C psi_n - w_n psi_n|| / ||psi_n||; zero for bases, generally not for
  /// redundant frames.
  double eigen_residual = 0.0;
};

/// L_C = C L.
CMatrix controlled_frame_operator(const Frame& frame, const Controller& c);

/// Certifies m_CL ||f||^2 <= <f, CL f> <= M_CL ||f||^2 spectrally: CL must be
/// Hermitian within tol and its smallest eigenvalue above tol * ||CL||.
ControlledCheck check_controlled(const Frame& frame, const Controller& c,
                                 double tol = kDefaultTol);

/// C = Psi diag(w) Psi~^* with Psi~ the canonical dual.
/// Throws NotAFrame, NotSemiNormalized (w must be positive and bounded away from 0).
DiagonalController diagonal_controller(const Frame& frame, const RVector& w,
                                       double tol = kDefaultTol);

struct OperatorBounds {
  double lower = 0.0;
  double upper = 0.0;
};

enum class BoundClause {
  FrameOperator,       // (i): inputs (CL, C), bounds for L
  Controller,          // (ii): inputs (CL, L), bounds for C
  ControlledOperator,  // (iii): inputs (L, C), bounds for CL
};

/// Bound arithmetic for a self-adjoint controller commuting with L.
///   FrameOperator:      (m_CL / M_C, M_CL / m_C)
///   Controller:         (m_CL / M,   M_CL / m)
///   ControlledOperator: (m m_C,      M M_C)
/// Throws NonPositiveInput unless 0 < lower <= upper for both inputs.
OperatorBounds bound_arithmetic(BoundClause clause, const OperatorBounds& first,
                                const OperatorBounds& second);

/// Partial sums of sum_k (I - A)^k until ||A S_K - I||_2 <= tol or max_iters.
/// Throws NotContractive when ||I - A||_2 >= 1.
NeumannResult neumann_invert(const CMatrix& a, std::size_t max_iters, double tol = kDefaultTol);

/// Richardson iteration g_{k+1} = g_k + 2/(m+M) (A f - A g_k) with A = L, or
/// A = C L when a controller is given, (m, M) the optimal bounds of A.
/// residual_history holds ||f - g_k|| for k = 0..iterations; the loop stops
/// once ||f - g_k|| <= tol ||f||.
FrameAlgorithmResult frame_algorithm(const Frame& frame, const CVector& f,
                                     const std::optional<Controller>& c, std::size_t max_iters,
                                     double tol = kDefaultTol);

/// kappa and delta = (M - m)/(M + m) for L and for C L. Throws NotControlled.
PreconditionReport precondition_report(const Frame& frame, const Controller& c,
                                       double tol = kDefaultTol);

}  // namespace framekit
