#pragma once

#include <complex>

#include <Eigen/Dense>

namespace framekit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Relative tolerance used by every operation that does not take one explicitly.
inline constexpr double kDefaultTol = 1e-10;

namespace linalg {

/// Spectrum of a Hermitian matrix. Eigenvalues ascend; eigenvector i is column i.
struct EigenResult {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

bool all_finite(const CMatrix& a) noexcept;

/// Throws Error(NonFinite) when `a` has a NaN/Inf entry or an empty dimension.
void require_finite(const CMatrix& a, const char* what);

/// Largest singular value.
double spectral_norm(const CMatrix& a);

/// ||A - A*||_F / ||A||_F, or 0 for the zero matrix.
double hermiticity_defect(const CMatrix& a);

/// Full eigendecomposition of a Hermitian matrix.
///
/// The symmetry check is relative in the Frobenius norm: ||A - A*||_F <= tol ||A||_F.
/// Throws NotHermitian / NonFinite.
EigenResult hermitian_eig(const CMatrix& a, double tol = kDefaultTol);

/// Eigenvalues only (ascending), same checks as hermitian_eig.
RVector hermitian_eigenvalues(const CMatrix& a, double tol = kDefaultTol);

/// The unique Hermitian PSD square root.
///
/// Eigenvalues in [-tol ||A||_2, 0) are clamped to zero; anything more negative
/// throws NotPSD.
CMatrix hermitian_sqrt(const CMatrix& a, double tol = kDefaultTol);

/// Moore-Penrose pseudo-inverse via SVD; singular values below
/// rank_tol * sigma_max are treated as zero.
CMatrix pseudo_inverse(const CMatrix& a, double rank_tol = kDefaultTol);

/// Pseudo-inverse of a real symmetric matrix through its eigendecomposition.
/// Eigenvalues with |lambda| <= rank_tol * max|lambda| are treated as zero.
RMatrix symmetric_pseudo_inverse(const RMatrix& a, double rank_tol = kDefaultTol);

/// True iff `a` is Hermitian within tol and min eigenvalue > tol * ||A||_2.
bool is_positive_definite(const CMatrix& a, double tol = kDefaultTol);

/// Solves A x = b for Hermitian positive definite A (Cholesky).
/// Throws NotPD when min eigenvalue <= tol * ||A||_2.
CVector solve_hpd(const CMatrix& a, const CVector& b, double tol = kDefaultTol);
CMatrix solve_hpd(const CMatrix& a, const CMatrix& b, double tol = kDefaultTol);

}  // namespace linalg
}  // namespace framekit
