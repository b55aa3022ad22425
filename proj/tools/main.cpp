#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pointflow/analytic.hpp"
#include "pointflow/config.hpp"
#include "pointflow/io.hpp"

namespace {

using namespace pointflow;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

/// Longest leading run of samples with a constant particle count; merges
/// change the count, so this is the leading event-free span.
Trajectory leading_span(const Trajectory& traj) {
  Trajectory out;
  if (traj.samples.empty()) return out;
  const std::size_t n = traj.samples.front().size();
  for (const auto& s : traj.samples) {
    if (s.size() != n) break;
    out.samples.push_back(s);
  }
  return out;
}

std::string invariant_report_text(const Trajectory& span, const WeightVector& weights) {
  if (span.samples.size() >= 2) {
    const InvariantReport rep = invariant_drift_report(span, weights);
    return io::report_json(rep, span.samples.front().time, span.samples.back().time,
                           span.samples.size());
  }
  // Degenerate runs (immediate merge or a single sample) still get a report
  // with the fixed schema.
  InvariantReport rep;
  if (!span.samples.empty()) {
    rep.scope = is_pure_source(span.samples.front()) ? "source" : "non-source";
    rep.conjecture_holds = true;
  }
  const double t = span.samples.empty() ? 0.0 : span.samples.front().time;
  return io::report_json(rep, t, t, span.samples.size());
}

WeightVector parse_weights(const std::string& text) {
  WeightVector w;
  std::string::size_type start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(',', start);
    const std::string item =
        pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start);
    try {
      std::size_t used = 0;
      w.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad weight '" + item + "'");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return w;
}

int run_simulate(const std::string& config_path, bool print_config) {
  const RunConfig cfg = parse_run_config(io::read_file(config_path));
  if (print_config) {
    std::cout << print_run_config(cfg);
    return kExitOk;
  }

  const Trajectory traj = simulate(cfg.initial, cfg.t_end, cfg.integrator);

  io::write_file(cfg.outputs.trajectory_path, io::trajectory_csv(traj, cfg.sample_stride));
  io::write_file(cfg.outputs.events_path, io::events_csv(traj.events));
  io::write_file(cfg.outputs.report_path,
                 invariant_report_text(leading_span(traj),
                                       source_weights(traj.samples.front())));
  if (!cfg.outputs.plot_path.empty()) {
    io::write_file(cfg.outputs.plot_path, io::trajectory_svg(traj));
  }

  const bool stalled =
      std::any_of(traj.events.begin(), traj.events.end(), [](const Event& e) {
        return e.kind == EventKind::termination;
      });
  if (stalled) {
    std::cerr << "warning: " << traj.events.back().detail << "\n";
    if (!cfg.blowup.enabled) return kExitNumerical;
  }
  return kExitOk;
}

int run_report(const std::string& trajectory_path, const std::string& weights_text,
               const std::string& plot_path) {
  const Trajectory parsed = io::parse_trajectory_csv(io::read_file(trajectory_path));
  const Trajectory span = leading_span(parsed);
  if (span.samples.size() < 2) {
    throw ConfigError("trajectory has fewer than two samples with a constant particle count");
  }
  WeightVector weights = weights_text.empty() ? source_weights(span.samples.front())
                                              : parse_weights(weights_text);
  if (weights.size() != span.samples.front().size()) {
    throw ConfigError("weights length does not match the particle count");
  }
  const InvariantReport rep = invariant_drift_report(span, weights);
  std::cout << io::report_json(rep, span.samples.front().time,
                               span.samples.back().time, span.samples.size());
  if (!plot_path.empty()) {
    io::write_file(plot_path, io::trajectory_svg(parsed));
  }
  return kExitOk;
}

int run_analytic(double s_re, double s_im, double r0, double theta0,
                 std::optional<double> t_max, int samples) {
  if (samples < 2) throw ConfigError("need at least two samples");
  TwoBodySolution sol(Complex{s_re, s_im}, r0, theta0);
  double horizon;
  if (t_max) {
    horizon = *t_max;
  } else if (auto tc = sol.collision()) {
    horizon = 0.9 * *tc;
  } else {
    horizon = 1.0;
  }
  if (auto tc = sol.collision(); tc && horizon >= *tc) {
    throw ConfigError("t_max reaches the collision at t = " + io::format_double(*tc));
  }
  std::cout << "t,r,theta,x,y\n";
  for (int i = 0; i < samples; ++i) {
    const double t = horizon * static_cast<double>(i) / (samples - 1);
    const PolarPoint p = two_body_polar(sol, t);
    const Complex z = std::polar(p.r, p.theta);
    std::cout << io::format_double(t) << ',' << io::format_double(p.r) << ','
              << io::format_double(p.theta) << ',' << io::format_double(z.real())
              << ',' << io::format_double(z.imag()) << "\n";
  }
  return kExitOk;
}

int run_blowup(const std::string& config_path) {
  const RunConfig cfg = parse_run_config(io::read_file(config_path));
  if (cfg.initial.size() < 2) throw ConfigError("blow-up runs need at least two particles");
  double total_abs = 0.0;
  for (const auto& p : cfg.initial.particles) total_abs += std::abs(p.intensity.value());
  if (std::abs(total_intensity(cfg.initial)) <= 1e-12 * total_abs) {
    throw ConfigError("blow-up output needs a nonzero total intensity to reconstruct positions");
  }

  const std::size_t base = cfg.blowup.base_particle;
  const SystemState rebased = with_base_last(cfg.initial, base);
  const RelativeState rel = to_relative(rebased);

  BlowupSelection sel = cfg.blowup.selection;
  if (sel.empty()) {
    for (std::size_t i = 0; i + 1 < cfg.initial.size(); ++i) sel.push_back(i);
  }

  const BlowupTrajectory btraj = integrate_blowup(rel, sel, cfg.blowup.s_end, cfg.integrator);

  // Reconstruct absolute positions and undo the base permutation so particle
  // ids match the configuration order.
  Trajectory traj;
  const std::size_t n = cfg.initial.size();
  for (const auto& sample : btraj.samples) {
    const SystemState permuted = from_relative(sample);
    SystemState restored;
    restored.time = permuted.time;
    restored.particles.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t from = k == base ? n - 1 : (k < base ? k : k - 1);
      restored.particles.push_back(permuted.particles[from]);
    }
    traj.samples.push_back(std::move(restored));
  }
  traj.events = btraj.events;

  io::write_file(cfg.outputs.trajectory_path, io::trajectory_csv(traj, cfg.sample_stride));
  io::write_file(cfg.outputs.events_path, io::events_csv(traj.events));
  if (!cfg.outputs.plot_path.empty()) {
    io::write_file(cfg.outputs.plot_path, io::trajectory_svg(traj));
  }

  if (!traj.events.empty() && traj.events.back().kind == EventKind::termination) {
    std::cerr << "warning: " << traj.events.back().detail << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar point-source / point-vortex interaction dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  bool print_config = false;
  auto* sim = app.add_subcommand("simulate", "integrate a configuration in physical time");
  sim->add_option("config", config_path, "run configuration (JSON)")->required();
  sim->add_flag("--print-config", print_config, "echo the normalized configuration and exit");

  std::string trajectory_path, weights_text, plot_path;
  auto* rep = app.add_subcommand("report", "invariant drift report for a trajectory file");
  rep->add_option("trajectory", trajectory_path, "trajectory CSV")->required();
  rep->add_option("--weights", weights_text, "comma-separated weights (default: Re gamma)");
  rep->add_option("--plot", plot_path, "write an SVG plot of the particle paths");

  double s_re = 2.0, s_im = 0.0, r0 = 1.0, theta0 = 0.0;
  std::optional<double> t_max;
  int samples = 9;
  auto* ana = app.add_subcommand("analytic", "closed-form two-body samples");
  ana->add_option("--s-re", s_re, "Re of the intensity sum");
  ana->add_option("--s-im", s_im, "Im of the intensity sum");
  ana->add_option("--r0", r0, "initial separation");
  ana->add_option("--theta0", theta0, "initial angle");
  ana->add_option("--t-max", t_max, "last sample time (default: 0.9 of the collision time)");
  ana->add_option("--samples", samples, "number of samples");

  std::string blowup_config_path;
  auto* blo = app.add_subcommand("blowup", "integrate a configuration in the blow-up chart");
  blo->add_option("config", blowup_config_path, "run configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
    if (*sim) return run_simulate(config_path, print_config);
    if (*rep) return run_report(trajectory_path, weights_text, plot_path);
    if (*ana) return run_analytic(s_re, s_im, r0, theta0, t_max, samples);
    if (*blo) return run_blowup(blowup_config_path);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInput;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
