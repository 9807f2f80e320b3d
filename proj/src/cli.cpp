#include "framekit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "framekit/controlled.hpp"
#include "framekit/error.hpp"
#include "framekit/frames.hpp"
#include "framekit/gabor.hpp"
#include "framekit/io.hpp"
#include "framekit/weighting.hpp"

namespace framekit::cli {

namespace {

using io::format_number;

struct Options {
  std::string input;
  std::string output;
  std::string dual_output;
  std::string format = "csv";
  std::size_t dim = 0;
  std::size_t count = 0;
  std::size_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::vector<std::string> windows;
  std::vector<std::size_t> a_values;
  std::vector<std::size_t> b_values;
  std::vector<std::size_t> mask_p;
  std::size_t support = 0;
  double amp = 2.0;
  std::size_t iters = 50;
  std::size_t threads = 0;
  std::string controller = "identity";
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownKind:
    case ErrorKind::InvalidLattice:
    case ErrorKind::MaskTooLarge:
    case ErrorKind::LengthMismatch:
    case ErrorKind::DimMismatch:
      return kUsageError;
    default:
      return kMathematical;
  }
}

// Writes to --output when given, otherwise to the report stream.
void emit(const Options& opts, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (opts.output.empty()) {
    body(out);
    return;
  }
  std::ofstream file(opts.output);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + opts.output);
  body(file);
}

void metadata(std::ostream& os, const std::string& command,
              const std::vector<std::pair<std::string, std::string>>& config) {
  os << "# framekit " << kVersion << " command=" << command;
  for (const auto& [key, value] : config) os << ' ' << key << '=' << value;
  os << '\n';
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ";" : "") << values[i];
  return os.str();
}

std::vector<gabor::GaborLattice> lattices_from(const Options& opts) {
  const std::size_t d = opts.dim == 0 ? 144 : opts.dim;
  if (opts.a_values.empty() && opts.b_values.empty()) return gabor::reference_lattices(d);
  if (opts.a_values.size() != opts.b_values.size()) {
    throw Error(ErrorKind::InvalidArgument, "--a and --b must list the same number of values");
  }
  std::vector<gabor::GaborLattice> lattices;
  for (std::size_t i = 0; i < opts.a_values.size(); ++i) {
    lattices.emplace_back(d, opts.a_values[i], opts.b_values[i]);
  }
  return lattices;
}

gabor::WindowSpec window_from(const Options& opts, const std::string& name) {
  gabor::WindowSpec spec;
  spec.kind = gabor::parse_window_kind(name);
  spec.length = opts.dim == 0 ? 144 : opts.dim;
  spec.support = opts.support;
  return spec;
}

int cmd_analyze(const Options& opts, std::ostream& out, std::ostream& err) {
  const Frame frame = io::read_frame(opts.input);
  const FrameBounds b = optimal_bounds(frame);
  const double kappa = b.is_frame ? b.upper / b.lower : std::numeric_limits<double>::infinity();
  emit(opts, out, [&](std::ostream& os) {
    if (opts.format == "json") {
      nlohmann::json doc{{"dim", frame.dim()},     {"count", frame.count()}, {"lower", b.lower},
                         {"upper", b.upper},       {"is_frame", b.is_frame}};
      doc["kappa"] = b.is_frame ? nlohmann::json(kappa) : nlohmann::json(nullptr);
      os << doc.dump(2) << '\n';
      return;
    }
    os << "dim,count,lower,upper,kappa,is_frame\n"
       << frame.dim() << ',' << frame.count() << ',' << format_number(b.lower) << ','
       << format_number(b.upper) << ',' << format_number(kappa) << ',' << (b.is_frame ? "true" : "false")
       << '\n';
    metadata(os, "analyze", {{"input", opts.input}});
  });
  if (!opts.dual_output.empty()) {
    if (!b.is_frame) {
      err << "NotAFrame: no canonical dual for a sequence that does not span the space\n";
      return kMathematical;
    }
    io::write_frame(opts.dual_output, canonical_dual(frame));
  }
  return kSuccess;
}

int cmd_weights(const Options& opts, std::ostream& out, std::ostream& err) {
  const Frame frame = io::read_frame(opts.input);
  const std::string name = opts.methods.empty() ? "p2" : opts.methods.front();
  const WeightMethod method = parse_weight_method(name);
  const WeightSeq weights = compute_weights(frame, method);
  emit(opts, out, [&](std::ostream& os) { os << io::weights_to_json(weights, name) << '\n'; });

  const double before = condition_number(frame);
  const FrameBounds after = optimal_bounds(apply_weights(frame, weights));
  out << "kappa_before=" << format_number(before) << '\n';
  if (!after.is_frame) {
    out << "kappa_after=NotAFrame\n";
    err << "NotAFrame: the weighted sequence does not span the space\n";
    return kMathematical;
  }
  out << "kappa_after=" << format_number(after.upper / after.lower) << '\n';
  return kSuccess;
}

int cmd_random_experiment(const Options& opts, std::ostream& out) {
  TighteningConfig config;
  config.dim = opts.dim;
  config.count = opts.count;
  config.trials = opts.trials;
  config.seed = *opts.seed;
  config.threads = opts.threads;
  if (!opts.methods.empty()) {
    config.methods.clear();
    for (const auto& m : opts.methods) config.methods.push_back(parse_weight_method(m));
  }
  const TighteningReport report = tightening_experiment(config);
  std::vector<std::string> method_names;
  for (const auto& t : report.methods) method_names.emplace_back(to_string(t.method));
  emit(opts, out, [&](std::ostream& os) {
    write_csv(os, report);
    metadata(os, "random-experiment",
             {{"dim", std::to_string(config.dim)},
              {"count", std::to_string(config.count)},
              {"trials", std::to_string(config.trials)},
              {"seed", std::to_string(config.seed)},
              {"methods", join(method_names)}});
  });
  return kSuccess;
}

int cmd_gabor_bounds(const Options& opts, std::ostream& out) {
  const std::vector<std::string> names =
      opts.windows.empty() ? std::vector<std::string>{"gauss", "hann", "bartlett"} : opts.windows;
  std::vector<gabor::WindowSpec> specs;
  for (const auto& n : names) specs.push_back(window_from(opts, n));
  const auto lattices = lattices_from(opts);
  const auto cells = gabor::bound_ratio_table(specs, lattices);
  emit(opts, out, [&](std::ostream& os) {
    gabor::write_ratio_csv(os, cells);
    metadata(os, "gabor-bounds",
             {{"dim", std::to_string(lattices.front().d())}, {"windows", join(names)},
              {"support", std::to_string(opts.support)}});
  });
  return kSuccess;
}

int cmd_gabor_dual_error(const Options& opts, std::ostream& out) {
  const std::string name = opts.windows.empty() ? "gauss" : opts.windows.front();
  const std::size_t d = opts.dim == 0 ? 144 : opts.dim;
  const gabor::GaborLattice lattice(d, opts.a_values.empty() ? 12 : opts.a_values.front(),
                                    opts.b_values.empty() ? 9 : opts.b_values.front());
  const gabor::MaskSpec mask{opts.mask_p.empty() ? 1 : opts.mask_p.front(), opts.amp};
  const auto result = gabor::gabor_dual_error(window_from(opts, name), lattice, mask);
  emit(opts, out, [&](std::ostream& os) {
    gabor::write_sweep_csv(os, {{result.lattice, result.window, mask.p, result.epsilon}});
    metadata(os, "gabor-dual-error",
             {{"dim", std::to_string(d)}, {"amp", format_number(opts.amp)},
              {"support", std::to_string(opts.support)},
              {"redundancy", format_number(result.redundancy)}});
  });
  return kSuccess;
}

int cmd_gabor_sweep(const Options& opts, std::ostream& out) {
  const std::string name = opts.windows.empty() ? "gauss" : opts.windows.front();
  const std::vector<std::size_t> ps =
      opts.mask_p.empty() ? std::vector<std::size_t>{1, 2, 3, 4} : opts.mask_p;
  const auto lattices = lattices_from(opts);
  const auto sweep = gabor::block_size_sweep(window_from(opts, name), lattices, ps, opts.amp);
  emit(opts, out, [&](std::ostream& os) {
    gabor::write_sweep_csv(os, sweep.cells);
    for (const auto& fit : sweep.fits) {
      os << "# fit a=" << fit.lattice.a() << " b=" << fit.lattice.b();
      if (fit.degenerate) {
        os << " degenerate\n";
      } else {
        os << " slope=" << format_number(fit.slope) << " intercept=" << format_number(fit.intercept)
           << " r2=" << format_number(fit.r_squared) << '\n';
      }
    }
    metadata(os, "gabor-sweep",
             {{"dim", std::to_string(lattices.front().d())}, {"window", name},
              {"amp", format_number(opts.amp)}, {"support", std::to_string(opts.support)}});
  });
  return kSuccess;
}

int cmd_precondition(const Options& opts, std::ostream& out, std::ostream& err) {
  const Frame frame = io::read_frame(opts.input);
  std::optional<Controller> controller;
  if (opts.controller == "identity") {
    controller = Controller::identity(frame.dim());
  } else if (opts.controller == "inverse") {
    controller = Controller::inverse_frame_operator(frame);
  } else {
    const std::string name = opts.methods.empty() ? "p2" : opts.methods.front();
    const RVector w = compute_weights(frame, parse_weight_method(name)).energies();
    controller = diagonal_controller(frame, w).controller;
  }
  if (!check_controlled(frame, *controller).is_controlled) {
    err << "NotControlled: C L is not positive and invertible\n";
    return kMathematical;
  }
  const PreconditionReport report = precondition_report(frame, *controller);

  const std::uint64_t seed = opts.seed.value_or(0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector f(static_cast<Eigen::Index>(frame.dim()));
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    f(i) = Complex(re, im);
  }
  const auto plain = frame_algorithm(frame, f, std::nullopt, opts.iters);
  const auto controlled = frame_algorithm(frame, f, controller, opts.iters);

  emit(opts, out, [&](std::ostream& os) {
    const auto& hp = plain.report.residual_history;
    const auto& hc = controlled.report.residual_history;
    os << "iteration,plain_residual,controlled_residual\n";
    for (std::size_t k = 0; k < std::max(hp.size(), hc.size()); ++k) {
      os << k << ',' << (k < hp.size() ? format_number(hp[k]) : "") << ','
         << (k < hc.size() ? format_number(hc[k]) : "") << '\n';
    }
    os << "# kappa_plain=" << format_number(report.kappa_plain)
       << " kappa_controlled=" << format_number(report.kappa_controlled)
       << " delta_plain=" << format_number(report.delta_plain)
       << " delta_controlled=" << format_number(report.delta_controlled) << '\n';
    metadata(os, "precondition",
             {{"input", opts.input}, {"controller", opts.controller},
              {"iters", std::to_string(opts.iters)}, {"seed", std::to_string(seed)}});
  });
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted and controlled frame toolkit", "framekit"};
  app.require_subcommand(1);
  Options opts;

  auto* analyze = app.add_subcommand("analyze", "Optimal bounds and condition number of a frame file");
  analyze->add_option("--input", opts.input, "Frame JSON")->required();
  analyze->add_option("--output", opts.output, "Report destination (default stdout)");
  analyze->add_option("--dual", opts.dual_output, "Write the canonical dual frame here");
  analyze->add_option("--format", opts.format)->check(CLI::IsMember({"csv", "json"}));

  auto* weights = app.add_subcommand("weights", "Compute tightening weights for a frame file");
  weights->add_option("--input", opts.input, "Frame JSON")->required();
  weights->add_option("--method", opts.methods, "p2, p4, p6, pinf or mult")->expected(1);
  weights->add_option("--output", opts.output, "Weights JSON destination (default stdout)");

  auto* experiment = app.add_subcommand("random-experiment", "Random-frame tightening statistics");
  experiment->add_option("--dim", opts.dim)->required()->check(CLI::PositiveNumber);
  experiment->add_option("--count", opts.count)->required()->check(CLI::PositiveNumber);
  experiment->add_option("--trials", opts.trials)->required()->check(CLI::PositiveNumber);
  experiment->add_option("--seed", opts.seed)->required();
  experiment->add_option("--method", opts.methods, "Comma-separated methods")->delimiter(',');
  experiment->add_option("--threads", opts.threads, "Worker threads (0 = all cores)");
  experiment->add_option("--output", opts.output, "CSV destination (default stdout)");

  auto* gabor_cmd = app.add_subcommand("gabor", "Discrete Gabor frame studies");
  gabor_cmd->require_subcommand(1);
  auto add_gabor_options = [&](CLI::App* sub) {
    sub->add_option("--dim", opts.dim, "Signal length (default 144)");
    sub->add_option("--a", opts.a_values, "Time shift(s)")->delimiter(',');
    sub->add_option("--b", opts.b_values, "Frequency shift(s)")->delimiter(',');
    sub->add_option("--window", opts.windows, "gauss, hann, bartlett, blackman, bspline3, bspline5")
        ->delimiter(',');
    sub->add_option("--support", opts.support, "Support of compact windows (default dim/4)");
    sub->add_option("--mask-p", opts.mask_p, "Mask half-width(s)")->delimiter(',');
    sub->add_option("--amp", opts.amp, "Mask amplification (default 2)");
    sub->add_option("--output", opts.output, "CSV destination (default stdout)");
  };
  auto* bounds = gabor_cmd->add_subcommand("bounds", "Frame bound ratio table");
  auto* dual_err = gabor_cmd->add_subcommand("dual-error", "Relative error of iWDG against DWG");
  auto* sweep = gabor_cmd->add_subcommand("sweep", "Error as a function of mask size");
  for (auto* sub : {bounds, dual_err, sweep}) add_gabor_options(sub);

  auto* precondition = app.add_subcommand("precondition", "Plain vs controlled frame algorithm");
  precondition->add_option("--input", opts.input, "Frame JSON")->required();
  precondition->add_option("--controller", opts.controller)
      ->check(CLI::IsMember({"identity", "inverse", "diag-weights"}));
  precondition->add_option("--method", opts.methods, "Weights for diag-weights (default p2)")->expected(1);
  precondition->add_option("--iters", opts.iters)->check(CLI::PositiveNumber);
  precondition->add_option("--seed", opts.seed, "Seed of the test signal (default 0)");
  precondition->add_option("--output", opts.output, "CSV destination (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(opts, out, err);
    if (weights->parsed()) return cmd_weights(opts, out, err);
    if (experiment->parsed()) return cmd_random_experiment(opts, out);
    if (bounds->parsed()) return cmd_gabor_bounds(opts, out);
    if (dual_err->parsed()) return cmd_gabor_dual_error(opts, out);
    if (sweep->parsed()) return cmd_gabor_sweep(opts, out);
    if (precondition->parsed()) return cmd_precondition(opts, out, err);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e.kind());
  }
  return kUsageError;
}

}  // namespace framekit::cli
