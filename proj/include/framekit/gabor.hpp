#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "framekit/frames.hpp"

namespace framekit::gabor {

/// Cyclic translation, (T_s x)[n] = x[(n - s) mod d].
CVector translate(const CVector& x, long shift);

/// Cyclic modulation, (M_f x)[n] = exp(2 pi i f n / d) x[n].
CVector modulate(const CVector& x, long freq);

/// Time shift a and frequency shift b over Z_d; both must divide d.
class GaborLattice {
 public:
  /// Throws InvalidLattice.
  GaborLattice(std::size_t d, std::size_t a, std::size_t b);

  std::size_t d() const noexcept { return d_; }
  std::size_t a() const noexcept { return a_; }
  std::size_t b() const noexcept { return b_; }
  std::size_t time_positions() const noexcept { return d_ / a_; }
  std::size_t frequency_positions() const noexcept { return d_ / b_; }
  std::size_t count() const noexcept { return time_positions() * frequency_positions(); }
  double redundancy() const noexcept {
    return static_cast<double>(d_) / static_cast<double>(a_ * b_);
  }
  /// Time-major atom ordering: all modulations of one time shift are adjacent.
  std::size_t atom_index(std::size_t k, std::size_t l) const noexcept {
    return k * frequency_positions() + l;
  }

  friend bool operator==(const GaborLattice&, const GaborLattice&) = default;

 private:
  std::size_t d_;
  std::size_t a_;
  std::size_t b_;
};

/// The six lattices of the d = 144 study, in order of increasing redundancy.
std::vector<GaborLattice> reference_lattices(std::size_t d = 144);

enum class WindowKind { Gauss, Hann, Bartlett, Blackman, BSpline3, BSpline5 };

std::string_view to_string(WindowKind kind) noexcept;
/// Accepts gauss, hann, bartlett, blackman, bspline3, bspline5. Throws UnknownKind.
WindowKind parse_window_kind(std::string_view name);

struct WindowSpec {
  WindowKind kind = WindowKind::Gauss;
  std::size_t length = 144;
  /// Gaussian: g[n] = sum_j exp(-pi (n + j d)^2 / (width d)).
  double gauss_width = 1.0;
  /// Compactly supported windows occupy n in [0, support); 0 means length / 4.
  /// support == length gives the full-length periodic window.
  std::size_t support = 0;
};

/// Real window of the requested kind, normalized to unit l2 norm.
CVector make_window(const WindowSpec& spec);

/// Atoms M_{l b} T_{k a} g, k < d/a, l < d/b, in time-major order.
/// Throws InvalidLattice when the window length differs from d.
Frame gabor_frame(const WindowSpec& spec, const GaborLattice& lattice);
Frame gabor_frame(const CVector& window, const GaborLattice& lattice);

/// Block of (2p+1)^2 lattice points around (0, 0), cyclically wrapped.
struct MaskSpec {
  std::size_t p = 1;
  double amp = 2.0;
};

/// amp on the mask block, 1 elsewhere; ordering matches gabor_frame.
/// Throws MaskTooLarge when 2p + 1 exceeds d/a or d/b.
WeightSeq mask_weights(const GaborLattice& lattice, const MaskSpec& mask);

/// Canonical dual of the weighted system (omega_n psi_n).
Frame dwg(const Frame& frame, const WeightSeq& weights, double tol = kDefaultTol);

/// Canonical dual of the original system, each element divided by omega_n.
Frame iwdg(const Frame& frame, const WeightSeq& weights, double tol = kDefaultTol);

/// ||iwdg - dwg||_F / ||dwg||_F. Throws NotAFrame, NotSemiNormalized.
double dual_error(const Frame& frame, const WeightSeq& weights, double tol = kDefaultTol);

struct DualErrorResult {
  double epsilon = 0.0;
  GaborLattice lattice;
  WindowKind window = WindowKind::Gauss;
  MaskSpec mask;
  double redundancy = 0.0;
};

DualErrorResult gabor_dual_error(const WindowSpec& spec, const GaborLattice& lattice,
                                 const MaskSpec& mask);

struct BoundRatioCell {
  GaborLattice lattice;
  WindowKind window = WindowKind::Gauss;
  std::optional<double> ratio;  // empty when the system is not a frame
};

/// Condition number of every (lattice, window) Gabor frame, lattice-major.
std::vector<BoundRatioCell> bound_ratio_table(const std::vector<WindowSpec>& windows,
                                              const std::vector<GaborLattice>& lattices);

struct SweepCell {
  GaborLattice lattice;
  WindowKind window = WindowKind::Gauss;
  std::size_t p = 0;
  std::optional<double> epsilon;  // empty when the mask does not fit or no frame
};

/// Least-squares line epsilon ~ slope * p + intercept for one lattice.
struct LineFit {
  GaborLattice lattice;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Fewer than two distinct p values (or no spread in epsilon): no fit.
  bool degenerate = true;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // lattice-major, p in the given order
  std::vector<LineFit> fits;     // one per lattice
};

SweepResult block_size_sweep(const WindowSpec& spec, const std::vector<GaborLattice>& lattices,
                             const std::vector<std::size_t>& p_values, double amp = 2.0);

LineFit fit_line(const GaborLattice& lattice, const std::vector<double>& x,
                 const std::vector<double>& y);

/// `a,b,window,ratio`; non-frames print as NotAFrame.
void write_ratio_csv(std::ostream& os, const std::vector<BoundRatioCell>& cells);
/// `a,b,window,p,epsilon`.
void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells);

}  // namespace framekit::gabor
