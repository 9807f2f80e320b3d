#include "framekit/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "framekit/error.hpp"

namespace framekit::gabor {

namespace {

constexpr int kGaussPeriods = 10;

long wrap(long n, long d) {
  const long r = n % d;
  return r < 0 ? r + d : r;
}

double cardinal_bspline(int order, double x) {
  // B_k(x) = 1/(k-1)! sum_j (-1)^j C(k,j) (x - j)_+^(k-1), supported on [0, k].
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= order; ++j) {
    const double t = x - j;
    if (t > 0.0) sum += ((j % 2 == 0) ? 1.0 : -1.0) * binom * std::pow(t, order - 1);
    binom = binom * (order - j) / (j + 1);
  }
  return sum / std::tgamma(static_cast<double>(order));
}

struct DualPair {
  CMatrix canonical;  // Phi~ for the weighted system
  CMatrix inverse_weighted;
};

// Reuses the unweighted canonical dual when sweeping many weight sequences.
DualPair dual_pair(const Frame& frame, const CMatrix& plain_dual, const WeightSeq& weights,
                   double tol) {
  if (!check_semi_normalized(weights, tol)) {
    throw Error(ErrorKind::NotSemiNormalized, "weights must be bounded away from zero");
  }
  return {canonical_dual(apply_weights(frame, weights), tol).synthesis(),
          plain_dual * weights.conjugate_reciprocal().values().asDiagonal()};
}

double relative_hs(const DualPair& pair) {
  return (pair.inverse_weighted - pair.canonical).norm() / pair.canonical.norm();
}

}  // namespace

CVector translate(const CVector& x, long shift) {
  const long d = static_cast<long>(x.size());
  CVector out(x.size());
  for (long n = 0; n < d; ++n) out(n) = x(wrap(n - shift, d));
  return out;
}

CVector modulate(const CVector& x, long freq) {
  const long d = static_cast<long>(x.size());
  CVector out(x.size());
  for (long n = 0; n < d; ++n) {
    // Reduce f n mod d first so the phase stays exact for large products.
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(wrap(freq * n, d)) / d;
    out(n) = std::polar(1.0, phase) * x(n);
  }
  return out;
}

GaborLattice::GaborLattice(std::size_t d, std::size_t a, std::size_t b) : d_(d), a_(a), b_(b) {
  if (d == 0 || a == 0 || b == 0 || d % a != 0 || d % b != 0) {
    std::ostringstream os;
    os << "lattice (a=" << a << ", b=" << b << ") requires a | d and b | d with d=" << d;
    throw Error(ErrorKind::InvalidLattice, os.str());
  }
}

std::vector<GaborLattice> reference_lattices(std::size_t d) {
  return {{d, 12, 9}, {d, 9, 8}, {d, 8, 6}, {d, 6, 6}, {d, 6, 4}, {d, 4, 4}};
}

std::string_view to_string(WindowKind kind) noexcept {
  switch (kind) {
    case WindowKind::Gauss: return "gauss";
    case WindowKind::Hann: return "hann";
    case WindowKind::Bartlett: return "bartlett";
    case WindowKind::Blackman: return "blackman";
    case WindowKind::BSpline3: return "bspline3";
    case WindowKind::BSpline5: return "bspline5";
  }
  return "unknown";
}

WindowKind parse_window_kind(std::string_view name) {
  for (WindowKind k : {WindowKind::Gauss, WindowKind::Hann, WindowKind::Bartlett,
                       WindowKind::Blackman, WindowKind::BSpline3, WindowKind::BSpline5}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::UnknownKind, "unknown window kind '" + std::string(name) + "'");
}

CVector make_window(const WindowSpec& spec) {
  if (spec.length < 2) throw Error(ErrorKind::InvalidArgument, "make_window: length must be >= 2");
  const auto d = static_cast<Eigen::Index>(spec.length);
  const std::size_t support = spec.support == 0 ? spec.length / 4 : spec.support;
  if (spec.kind != WindowKind::Gauss && (support < 2 || support > spec.length)) {
    throw Error(ErrorKind::InvalidArgument, "make_window: support must lie in [2, length]");
  }
  const double width = static_cast<double>(support);
  constexpr double pi = std::numbers::pi;

  RVector g = RVector::Zero(d);
  switch (spec.kind) {
    case WindowKind::Gauss: {
      if (!(spec.gauss_width > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "make_window: Gaussian width must be positive");
      }
      const double dd = static_cast<double>(d);
      for (Eigen::Index n = 0; n < d; ++n) {
        for (int j = -kGaussPeriods; j <= kGaussPeriods; ++j) {
          const double t = static_cast<double>(n) + j * dd;
          g(n) += std::exp(-pi * t * t / (spec.gauss_width * dd));
        }
      }
      break;
    }
    case WindowKind::Hann:
      for (std::size_t n = 0; n < support; ++n) g(n) = 0.5 - 0.5 * std::cos(2.0 * pi * n / width);
      break;
    case WindowKind::Bartlett:
      for (std::size_t n = 0; n < support; ++n) {
        g(n) = 1.0 - std::abs(static_cast<double>(n) - width / 2.0) / (width / 2.0);
      }
      break;
    case WindowKind::Blackman:
      for (std::size_t n = 0; n < support; ++n) {
        g(n) = 0.42 - 0.5 * std::cos(2.0 * pi * n / width) + 0.08 * std::cos(4.0 * pi * n / width);
      }
      break;
    case WindowKind::BSpline3:
    case WindowKind::BSpline5: {
      const int order = spec.kind == WindowKind::BSpline3 ? 3 : 5;
      for (std::size_t n = 0; n < support; ++n) g(n) = cardinal_bspline(order, order * n / width);
      break;
    }
  }
  g = g.cwiseMax(0.0);  // Blackman dips a rounding error below zero at its ends
  const double norm = g.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidArgument, "make_window: window vanishes");
  return (g / norm).cast<Complex>();
}

Frame gabor_frame(const CVector& window, const GaborLattice& lattice) {
  if (static_cast<std::size_t>(window.size()) != lattice.d()) {
    throw Error(ErrorKind::InvalidLattice, "gabor_frame: window length differs from lattice d");
  }
  CMatrix atoms(window.size(), static_cast<Eigen::Index>(lattice.count()));
  for (std::size_t k = 0; k < lattice.time_positions(); ++k) {
    const CVector shifted = translate(window, static_cast<long>(k * lattice.a()));
    for (std::size_t l = 0; l < lattice.frequency_positions(); ++l) {
      atoms.col(static_cast<Eigen::Index>(lattice.atom_index(k, l))) =
          modulate(shifted, static_cast<long>(l * lattice.b()));
    }
  }
  return Frame(std::move(atoms));
}

Frame gabor_frame(const WindowSpec& spec, const GaborLattice& lattice) {
  if (spec.length != lattice.d()) {
    throw Error(ErrorKind::InvalidLattice, "gabor_frame: window length differs from lattice d");
  }
  return gabor_frame(make_window(spec), lattice);
}

WeightSeq mask_weights(const GaborLattice& lattice, const MaskSpec& mask) {
  const std::size_t side = 2 * mask.p + 1;
  if (side > lattice.time_positions() || side > lattice.frequency_positions()) {
    std::ostringstream os;
    os << "mask_weights: block of side " << side << " does not fit a " << lattice.time_positions()
       << "x" << lattice.frequency_positions() << " lattice";
    throw Error(ErrorKind::MaskTooLarge, os.str());
  }
  if (!(mask.amp > 0.0) || !std::isfinite(mask.amp)) {
    throw Error(ErrorKind::InvalidArgument, "mask_weights: amp must be positive");
  }
  const auto in_block = [&](std::size_t idx, std::size_t period) {
    return idx <= mask.p || idx >= period - mask.p;
  };
  RVector w = RVector::Ones(static_cast<Eigen::Index>(lattice.count()));
  for (std::size_t k = 0; k < lattice.time_positions(); ++k) {
    if (!in_block(k, lattice.time_positions())) continue;
    for (std::size_t l = 0; l < lattice.frequency_positions(); ++l) {
      if (in_block(l, lattice.frequency_positions())) {
        w(static_cast<Eigen::Index>(lattice.atom_index(k, l))) = mask.amp;
      }
    }
  }
  return WeightSeq::real(w);
}

Frame dwg(const Frame& frame, const WeightSeq& weights, double tol) {
  if (!check_semi_normalized(weights, tol)) {
    throw Error(ErrorKind::NotSemiNormalized, "dwg: weights must be bounded away from zero");
  }
  return canonical_dual(apply_weights(frame, weights), tol);
}

Frame iwdg(const Frame& frame, const WeightSeq& weights, double tol) {
  if (!check_semi_normalized(weights, tol)) {
    throw Error(ErrorKind::NotSemiNormalized, "iwdg: weights must be bounded away from zero");
  }
  return apply_weights(canonical_dual(frame, tol), weights.conjugate_reciprocal());
}

double dual_error(const Frame& frame, const WeightSeq& weights, double tol) {
  if (weights.size() != frame.count()) {
    throw Error(ErrorKind::LengthMismatch, "dual_error: one weight per element required");
  }
  const CMatrix plain = canonical_dual(frame, tol).synthesis();
  return relative_hs(dual_pair(frame, plain, weights, tol));
}

DualErrorResult gabor_dual_error(const WindowSpec& spec, const GaborLattice& lattice,
                                 const MaskSpec& mask) {
  const Frame frame = gabor_frame(spec, lattice);
  DualErrorResult result{dual_error(frame, mask_weights(lattice, mask)), lattice, spec.kind, mask,
                         lattice.redundancy()};
  return result;
}

std::vector<BoundRatioCell> bound_ratio_table(const std::vector<WindowSpec>& windows,
                                              const std::vector<GaborLattice>& lattices) {
  std::vector<BoundRatioCell> cells;
  cells.reserve(windows.size() * lattices.size());
  for (const GaborLattice& lattice : lattices) {
    for (const WindowSpec& spec : windows) {
      BoundRatioCell cell{lattice, spec.kind, std::nullopt};
      const FrameBounds b = optimal_bounds(gabor_frame(spec, lattice));
      if (b.is_frame) cell.ratio = b.upper / b.lower;
      cells.push_back(cell);
    }
  }
  return cells;
}

LineFit fit_line(const GaborLattice& lattice, const std::vector<double>& x,
                 const std::vector<double>& y) {
  LineFit fit{lattice};
  const std::set<double> distinct(x.begin(), x.end());
  if (x.size() != y.size() || distinct.size() < 2) return fit;
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixX2d design(n, 2);
  RVector rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = x[static_cast<std::size_t>(i)];
    design(i, 1) = 1.0;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const double ss_res = (design * coef - rhs).squaredNorm();
  const double ss_tot = (rhs.array() - rhs.mean()).square().sum();
  fit.slope = coef(0);
  fit.intercept = coef(1);
  if (ss_tot > 0.0) {
    fit.r_squared = 1.0 - ss_res / ss_tot;
    fit.degenerate = false;
  }
  return fit;
}

SweepResult block_size_sweep(const WindowSpec& spec, const std::vector<GaborLattice>& lattices,
                             const std::vector<std::size_t>& p_values, double amp) {
  SweepResult result;
  const CVector window = make_window(spec);
  for (const GaborLattice& lattice : lattices) {
    const Frame frame = gabor_frame(window, lattice);
    std::optional<CMatrix> plain;
    try {
      plain = canonical_dual(frame).synthesis();
    } catch (const Error&) {
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t p : p_values) {
      SweepCell cell{lattice, spec.kind, p, std::nullopt};
      if (plain) {
        try {
          cell.epsilon = relative_hs(dual_pair(frame, *plain, mask_weights(lattice, {p, amp}), kDefaultTol));
          xs.push_back(static_cast<double>(p));
          ys.push_back(*cell.epsilon);
        } catch (const Error&) {
          // Marked as an empty cell: mask too large or weighted system not a frame.
        }
      }
      result.cells.push_back(cell);
    }
    result.fits.push_back(fit_line(lattice, xs, ys));
  }
  return result;
}

void write_ratio_csv(std::ostream& os, const std::vector<BoundRatioCell>& cells) {
  const auto old = os.precision(15);
  os << "a,b,window,ratio\n";
  for (const BoundRatioCell& c : cells) {
    os << c.lattice.a() << ',' << c.lattice.b() << ',' << to_string(c.window) << ',';
    if (c.ratio) os << *c.ratio; else os << "NotAFrame";
    os << '\n';
  }
  os.precision(old);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
  const auto old = os.precision(15);
  os << "a,b,window,p,epsilon\n";
  for (const SweepCell& c : cells) {
    os << c.lattice.a() << ',' << c.lattice.b() << ',' << to_string(c.window) << ',' << c.p << ',';
    if (c.epsilon) os << *c.epsilon; else os << "NA";
    os << '\n';
  }
  os.precision(old);
}

}  // namespace framekit::gabor
