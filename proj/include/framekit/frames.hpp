#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "framekit/linalg.hpp"

namespace framekit {

/// A finite sequence of vectors in C^d, stored as the d x M synthesis matrix
/// whose column n is the n-th element. Whether the sequence spans C^d is a
/// computed property (see optimal_bounds), not an invariant.
class Frame {
 public:
  explicit Frame(CMatrix synthesis);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(synthesis_.rows()); }
  std::size_t count() const noexcept { return static_cast<std::size_t>(synthesis_.cols()); }

  const CMatrix& synthesis() const noexcept { return synthesis_; }
  auto element(std::size_t n) const { return synthesis_.col(static_cast<Eigen::Index>(n)); }

  static Frame from_elements(const std::vector<CVector>& elements);

 private:
  CMatrix synthesis_;
};

/// Element weights omega_n. The energy weights of the equivalent w-frame are
/// |omega_n|^2; unit-modulus phases live inside the complex entries.
class WeightSeq {
 public:
  explicit WeightSeq(CVector values);
  static WeightSeq real(const RVector& values);
  static WeightSeq constant(std::size_t size, Complex value);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  const CVector& values() const noexcept { return values_; }
  Complex operator[](std::size_t n) const { return values_(static_cast<Eigen::Index>(n)); }

  RVector energies() const { return values_.cwiseAbs2(); }
  WeightSeq reciprocal() const;
  // 1/conj(w): the weights that turn a dual of (psi_n) into a dual of (w_n psi_n).
  WeightSeq conjugate_reciprocal() const;

 private:
  CVector values_;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool optimal = false;
  /// lower > tol * upper; relative, so rescaling never flips it.
  bool is_frame = false;
};

struct SemiNormalizedBounds {
  double a = 0.0;
  double b = 0.0;
};

struct DualCheck {
  bool is_dual = false;
  double residual = 0.0;
};

/// G(k,l) = <psi_l, psi_k> with the inner product linear in the first slot,
/// i.e. G = Phi^* Phi.
CMatrix gram(const Frame& frame);

/// L = Phi Phi^*.
CMatrix frame_operator(const Frame& frame);

/// Extreme eigenvalues of the frame operator.
FrameBounds optimal_bounds(const Frame& frame, double tol = kDefaultTol);

/// Columns L^{-1} psi_n, obtained by Cholesky solves rather than an explicit
/// inverse. Throws NotAFrame.
Frame canonical_dual(const Frame& frame, double tol = kDefaultTol);

/// Column n scaled by omega_n. Throws LengthMismatch.
Frame apply_weights(const Frame& frame, const WeightSeq& weights);

/// (min |omega_n|, max |omega_n|), or nullopt when min |omega_n| <= tol.
std::optional<SemiNormalizedBounds> check_semi_normalized(const WeightSeq& weights,
                                                          double tol = kDefaultTol);

/// f -> sum_k m_k <f, psi_k> phi_k, i.e. Phi diag(m) Psi^*.
CMatrix multiplier(const CVector& symbol, const Frame& analysis, const Frame& synthesis);
CMatrix multiplier(const RVector& symbol, const Frame& analysis, const Frame& synthesis);

/// residual = ||Phi Psi^* - I||_2; the pair is dual iff residual <= tol.
DualCheck check_dual_pair(const Frame& psi, const Frame& phi, double tol = kDefaultTol);

/// M_opt / m_opt. Throws NotAFrame.
double condition_number(const Frame& frame, double tol = kDefaultTol);

}  // namespace framekit
