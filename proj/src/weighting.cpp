#include "framekit/weighting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "framekit/error.hpp"

namespace framekit {

namespace {

constexpr int kSpanRetries = 32;
// Condition numbers closer than this (relative) are rounding noise, not an improvement.
constexpr double kImprovementMargin = 1e-12;

// |<psi_n, psi_k>| for all n, k, plus the element norms. Throws ZeroElement.
struct GramMagnitudes {
  RMatrix magnitude;
  RVector norms;
};

GramMagnitudes gram_magnitudes(const Frame& frame, double tol, const char* what) {
  const CMatrix g = gram(frame);
  GramMagnitudes out{g.cwiseAbs(), g.diagonal().real().cwiseMax(0.0).cwiseSqrt()};
  const double largest = out.norms.maxCoeff();
  for (Eigen::Index n = 0; n < out.norms.size(); ++n) {
    if (!(out.norms(n) > tol * largest) || largest == 0.0) {
      std::ostringstream os;
      os << what << ": element " << n << " is (numerically) zero";
      throw Error(ErrorKind::ZeroElement, os.str());
    }
  }
  return out;
}

std::vector<WeightMethod> canonical_methods(std::vector<WeightMethod> methods) {
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  return methods;
}

}  // namespace

std::string_view to_string(WeightMethod method) noexcept {
  switch (method) {
    case WeightMethod::P2: return "p2";
    case WeightMethod::P4: return "p4";
    case WeightMethod::P6: return "p6";
    case WeightMethod::PInf: return "pinf";
    case WeightMethod::Mult: return "mult";
  }
  return "unknown";
}

WeightMethod parse_weight_method(std::string_view name) {
  for (WeightMethod m : kAllWeightMethods) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::UnknownKind, "unknown weight method '" + std::string(name) + "'");
}

WeightSeq weight_lp(const Frame& frame, int p, double tol) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "weight_lp: p must be >= 1");
  const GramMagnitudes gm = gram_magnitudes(frame, tol, "weight_lp");
  const double exponent = static_cast<double>(p);
  RVector w(gm.norms.size());
  for (Eigen::Index n = 0; n < w.size(); ++n) {
    // Scale by the row maximum so large p cannot overflow.
    const double peak = gm.magnitude.row(n).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) sum += std::pow(gm.magnitude(n, k) / peak, exponent);
    w(n) = gm.norms(n) / (peak * std::pow(sum, 1.0 / exponent));
  }
  return WeightSeq::real(w);
}

WeightSeq weight_linf(const Frame& frame, double tol) {
  const GramMagnitudes gm = gram_magnitudes(frame, tol, "weight_linf");
  RVector w(gm.norms.size());
  for (Eigen::Index n = 0; n < w.size(); ++n) w(n) = gm.norms(n) / gm.magnitude.row(n).maxCoeff();
  return WeightSeq::real(w);
}

WeightSeq weight_multiplier(const Frame& frame, double rank_tol, double clamp_tol) {
  const GramMagnitudes gm = gram_magnitudes(frame, kDefaultTol, "weight_multiplier");
  const RMatrix g2 = gm.magnitude.cwiseAbs2();
  const RVector x = gm.norms.cwiseAbs2();
  const RVector radicand = linalg::symmetric_pseudo_inverse(g2, rank_tol) * x;
  const double scale = radicand.cwiseAbs().maxCoeff();
  RVector w(radicand.size());
  for (Eigen::Index n = 0; n < w.size(); ++n) {
    if (radicand(n) < -clamp_tol * scale) {
      std::ostringstream os;
      os << "weight_multiplier: radicand " << radicand(n) << " at element " << n;
      throw Error(ErrorKind::NegativeRadicand, os.str());
    }
    w(n) = std::sqrt(std::max(radicand(n), 0.0));
  }
  return WeightSeq::real(w);
}

WeightSeq compute_weights(const Frame& frame, WeightMethod method) {
  switch (method) {
    case WeightMethod::P2: return weight_lp(frame, 2);
    case WeightMethod::P4: return weight_lp(frame, 4);
    case WeightMethod::P6: return weight_lp(frame, 6);
    case WeightMethod::PInf: return weight_linf(frame);
    case WeightMethod::Mult: return weight_multiplier(frame);
  }
  throw Error(ErrorKind::UnknownKind, "compute_weights: unknown method");
}

Frame random_frame(std::size_t dim, std::size_t count, std::uint64_t seed, double spread_tol) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "random_frame: dim must be >= 1");
  if (count <= dim) {
    std::ostringstream os;
    os << "random_frame: need more elements than dimensions (M = " << count << ", d = " << dim << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(2.0);
  const auto d = static_cast<Eigen::Index>(dim);
  const auto m = static_cast<Eigen::Index>(count);
  for (int attempt = 0; attempt < kSpanRetries; ++attempt) {
    CMatrix synthesis(d, m);
    for (Eigen::Index col = 0; col < m; ++col) {
      for (Eigen::Index row = 0; row < d; ++row) {
        const double re = normal(rng);
        const double im = normal(rng);
        synthesis(row, col) = Complex(re * scale, im * scale);
      }
    }
    Frame frame(std::move(synthesis));
    const FrameBounds b = optimal_bounds(frame);
    if (std::sqrt(b.lower) > spread_tol * std::sqrt(b.upper)) return frame;
  }
  throw Error(ErrorKind::SpanFailure, "random_frame: retry budget exhausted");
}

TrialOutcome evaluate_trial(const Frame& frame, const std::vector<WeightMethod>& methods) {
  const std::vector<WeightMethod> order = canonical_methods(methods);
  TrialOutcome outcome;
  outcome.kappa_plain = condition_number(frame);
  outcome.kappa_weighted.resize(order.size());
  outcome.improved.assign(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    try {
      const Frame weighted = apply_weights(frame, compute_weights(frame, order[i]));
      const FrameBounds b = optimal_bounds(weighted);
      if (b.is_frame) outcome.kappa_weighted[i] = b.upper / b.lower;
    } catch (const Error&) {
      // Undefined weights count as a failed, non-improving method.
    }
    outcome.improved[i] = outcome.kappa_weighted[i] &&
                          *outcome.kappa_weighted[i] < outcome.kappa_plain * (1.0 - kImprovementMargin);
    if (outcome.improved[i] &&
        (!outcome.best || *outcome.kappa_weighted[i] < *outcome.kappa_weighted[*outcome.best])) {
      outcome.best = i;
    }
  }
  return outcome;
}

TighteningReport tightening_experiment(const TighteningConfig& config) {
  if (config.trials < 1) throw Error(ErrorKind::InvalidArgument, "tightening_experiment: trials must be >= 1");
  if (config.methods.empty()) throw Error(ErrorKind::InvalidArgument, "tightening_experiment: no methods");
  if (config.count <= config.dim) {
    throw Error(ErrorKind::InvalidArgument, "tightening_experiment: need count > dim");
  }
  const std::vector<WeightMethod> order = canonical_methods(config.methods);

  std::vector<TrialOutcome> outcomes(config.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < config.trials; t = next++) {
      try {
        outcomes[t] = evaluate_trial(random_frame(config.dim, config.count, config.seed ^ t), order);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, config.trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  TighteningReport report;
  report.trials = config.trials;
  report.dim = config.dim;
  report.count = config.count;
  report.seed = config.seed;
  for (WeightMethod m : order) report.methods.push_back({m, 0, 0, 0});
  for (const TrialOutcome& o : outcomes) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (o.improved[i]) ++report.methods[i].improved;
      if (!o.kappa_weighted[i]) ++report.methods[i].failed;
    }
    if (o.best) {
      ++report.methods[*o.best].best;
      ++report.overall_improved;
    }
  }
  return report;
}

void write_csv(std::ostream& os, const TighteningReport& report) {
  os << "method,improved,best,trials,dim,count,seed\n";
  for (const MethodTally& t : report.methods) {
    os << to_string(t.method) << ',' << t.improved << ',' << t.best << ',' << report.trials << ','
       << report.dim << ',' << report.count << ',' << report.seed << '\n';
  }
  os << "__overall__," << report.overall_improved << ',' << report.overall_improved << ','
     << report.trials << ',' << report.dim << ',' << report.count << ',' << report.seed << '\n';
}

}  // namespace framekit
