#include "framekit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "framekit/error.hpp"

namespace framekit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotPD: return "NotPD";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotControlled: return "NotControlled";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::NotSemiNormalized: return "NotSemiNormalized";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::SpanFailure: return "SpanFailure";
    case ErrorKind::InvalidLattice: return "InvalidLattice";
    case ErrorKind::MaskTooLarge: return "MaskTooLarge";
    case ErrorKind::UnknownKind: return "UnknownKind";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace linalg {

namespace {

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw Error(ErrorKind::DimMismatch, os.str());
  }
}

void require_hermitian(const CMatrix& a, double tol, const char* what) {
  require_finite(a, what);
  require_square(a, what);
  const double defect = hermiticity_defect(a);
  if (defect > tol) {
    std::ostringstream os;
    os << what << ": relative hermiticity defect " << defect << " exceeds " << tol;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
}

// Only the lower triangle is read, so tiny asymmetries from products like
// Phi * Phi^* never leak into the spectrum.
Eigen::SelfAdjointEigenSolver<CMatrix> decompose(const CMatrix& a, bool vectors) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(
      a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonFinite, "Hermitian eigensolver did not converge");
  }
  return solver;
}

}  // namespace

bool all_finite(const CMatrix& a) noexcept {
  return a.size() > 0 && a.allFinite();
}

void require_finite(const CMatrix& a, const char* what) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw Error(ErrorKind::NonFinite, std::string(what) + ": empty matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::NonFinite, std::string(what) + ": NaN or Inf entry");
  }
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double hermiticity_defect(const CMatrix& a) {
  const double scale = a.norm();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / scale;
}

EigenResult hermitian_eig(const CMatrix& a, double tol) {
  require_hermitian(a, tol, "hermitian_eig");
  auto solver = decompose(a, true);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RVector hermitian_eigenvalues(const CMatrix& a, double tol) {
  require_hermitian(a, tol, "hermitian_eigenvalues");
  return decompose(a, false).eigenvalues();
}

CMatrix hermitian_sqrt(const CMatrix& a, double tol) {
  const EigenResult eig = hermitian_eig(a, tol);
  const auto& lambda = eig.eigenvalues;
  const double scale = std::max(std::abs(lambda(0)), std::abs(lambda(lambda.size() - 1)));
  if (lambda(0) < -tol * scale) {
    std::ostringstream os;
    os << "hermitian_sqrt: eigenvalue " << lambda(0) << " below -tol*||A||";
    throw Error(ErrorKind::NotPSD, os.str());
  }
  const RVector roots = lambda.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors * roots.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

CMatrix pseudo_inverse(const CMatrix& a, double rank_tol) {
  require_finite(a, "pseudo_inverse");
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? rank_tol * sigma(0) : 0.0;
  RVector inv = RVector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

RMatrix symmetric_pseudo_inverse(const RMatrix& a, double rank_tol) {
  if (a.rows() != a.cols() || a.size() == 0) {
    throw Error(ErrorKind::DimMismatch, "symmetric_pseudo_inverse: expected a square matrix");
  }
  if (!a.allFinite()) throw Error(ErrorKind::NonFinite, "symmetric_pseudo_inverse: NaN or Inf entry");
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonFinite, "symmetric eigensolver did not converge");
  }
  const RVector& lambda = solver.eigenvalues();
  const double cutoff = rank_tol * lambda.cwiseAbs().maxCoeff();
  RVector inv = RVector::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda(i)) > cutoff) inv(i) = 1.0 / lambda(i);
  }
  return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().transpose();
}

bool is_positive_definite(const CMatrix& a, double tol) {
  if (!all_finite(a) || a.rows() != a.cols()) return false;
  if (hermiticity_defect(a) > tol) return false;
  const RVector lambda = decompose(a, false).eigenvalues();
  const double scale = std::max(std::abs(lambda(0)), std::abs(lambda(lambda.size() - 1)));
  return scale > 0.0 && lambda(0) > tol * scale;
}

CMatrix solve_hpd(const CMatrix& a, const CMatrix& b, double tol) {
  require_finite(b, "solve_hpd");
  if (b.rows() != a.rows()) {
    throw Error(ErrorKind::DimMismatch, "solve_hpd: right-hand side has wrong length");
  }
  const RVector lambda = hermitian_eigenvalues(a, tol);
  const double scale = std::max(std::abs(lambda(0)), std::abs(lambda(lambda.size() - 1)));
  if (!(scale > 0.0) || lambda(0) <= tol * scale) {
    std::ostringstream os;
    os << "solve_hpd: min eigenvalue " << lambda(0) << " not above tol*||A|| = " << tol * scale;
    throw Error(ErrorKind::NotPD, os.str());
  }
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPD, "solve_hpd: Cholesky failed");
  return llt.solve(b);
}

CVector solve_hpd(const CMatrix& a, const CVector& b, double tol) {
  return solve_hpd(a, CMatrix(b), tol).col(0);
}

}  // namespace linalg
}  // namespace framekit
