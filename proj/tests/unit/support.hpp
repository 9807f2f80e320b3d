#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include <doctest.h>

#include "framekit/error.hpp"
#include "framekit/linalg.hpp"

namespace testing_support {

using framekit::CMatrix;
using framekit::Complex;
using framekit::RVector;

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im);
    }
  return a;
}

inline CMatrix random_hpd(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix x = random_matrix(n, n, rng);
  CMatrix a = x * x.adjoint() + 0.5 * CMatrix::Identity(n, n);
  return 0.5 * (a + a.adjoint()).eval();
}

// Rank-deficient product of random factors.
inline CMatrix random_low_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                               std::mt19937_64& rng) {
  return random_matrix(rows, rank, rng) * random_matrix(rank, cols, rng);
}

inline RVector random_positive(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  RVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline double rel_diff(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

// Kind of the Error thrown by fn; empty if it returned normally.
inline std::optional<framekit::ErrorKind> kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const framekit::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace testing_support
