#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "framekit/frames.hpp"

namespace framekit {

/// Frame-tightening weight schemes. Enumerator order is the tie-break order
/// when deciding which method is best.
enum class WeightMethod { P2, P4, P6, PInf, Mult };

inline constexpr std::array<WeightMethod, 5> kAllWeightMethods = {
    WeightMethod::P2, WeightMethod::P4, WeightMethod::P6, WeightMethod::PInf, WeightMethod::Mult};
inline constexpr std::array<WeightMethod, 3> kDefaultExperimentMethods = {
    WeightMethod::P2, WeightMethod::PInf, WeightMethod::Mult};

std::string_view to_string(WeightMethod method) noexcept;
/// Accepts p2, p4, p6, pinf, mult. Throws UnknownKind.
WeightMethod parse_weight_method(std::string_view name);

/// omega_n = ||psi_n|| / (sum_k |<psi_n, psi_k>|^p)^(1/p), the k = n term included.
/// Any p >= 1 is accepted. Throws ZeroElement.
WeightSeq weight_lp(const Frame& frame, int p, double tol = kDefaultTol);

/// omega_n = ||psi_n|| / max_k |<psi_n, psi_k>|. Throws ZeroElement.
WeightSeq weight_linf(const Frame& frame, double tol = kDefaultTol);

/// omega_n = sqrt( [G2^+ x]_n ) with G2(p,q) = |<psi_q, psi_p>|^2 and
/// x_k = ||psi_k||^2: the diagonal symbol whose multiplier is closest to the
/// identity in Frobenius norm. Radicands in [-clamp_tol * max|r|, 0) become 0;
/// anything more negative throws NegativeRadicand.
WeightSeq weight_multiplier(const Frame& frame, double rank_tol = kDefaultTol,
                            double clamp_tol = kDefaultTol);

WeightSeq compute_weights(const Frame& frame, WeightMethod method);

/// d x M frame with i.i.d. standard complex normal entries drawn from a
/// mt19937_64 seeded with `seed`; redrawn (bounded retries) until
/// sigma_min > spread_tol * sigma_max. Requires M > d.
Frame random_frame(std::size_t dim, std::size_t count, std::uint64_t seed,
                   double spread_tol = 1e-6);

/// Condition number of a weighted frame for one trial; nullopt marks a method
/// that failed (undefined weights or a weighted system that is not a frame).
struct TrialOutcome {
  double kappa_plain = 0.0;
  std::vector<std::optional<double>> kappa_weighted;  // parallel to the method list
  std::vector<bool> improved;
  std::optional<std::size_t> best;  // index into the method list, only if something improved
};

/// Methods are evaluated in the canonical order of `methods` (sorted, deduplicated).
TrialOutcome evaluate_trial(const Frame& frame, const std::vector<WeightMethod>& methods);

struct TighteningConfig {
  std::size_t dim = 0;
  std::size_t count = 0;
  std::size_t trials = 0;
  std::vector<WeightMethod> methods{kDefaultExperimentMethods.begin(),
                                    kDefaultExperimentMethods.end()};
  std::uint64_t seed = 0;
  /// 0 picks std::thread::hardware_concurrency(). Results never depend on it.
  std::size_t threads = 0;
};

struct MethodTally {
  WeightMethod method = WeightMethod::P2;
  std::size_t improved = 0;
  std::size_t best = 0;
  std::size_t failed = 0;
};

struct TighteningReport {
  std::size_t trials = 0;
  std::size_t dim = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::vector<MethodTally> methods;
  std::size_t overall_improved = 0;

  double overall_fraction() const {
    return trials == 0 ? 0.0 : static_cast<double>(overall_improved) / static_cast<double>(trials);
  }
};

/// Trial t uses random_frame(dim, count, seed ^ t). Per-trial failures are
/// recorded, never thrown.
TighteningReport tightening_experiment(const TighteningConfig& config);

/// CSV with header `method,improved,best,trials,dim,count,seed`, one row per
/// method and a final `__overall__` row.
void write_csv(std::ostream& os, const TighteningReport& report);

}  // namespace framekit
