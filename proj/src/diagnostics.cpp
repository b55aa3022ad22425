#include "pointflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pointflow {

namespace {

constexpr double kUnwrapLimit = std::numbers::pi / 2.0;
constexpr double kGradientStep = 1e-5;

void require_uniform(const Trajectory& traj) {
  if (traj.samples.size() < 2) {
    throw std::invalid_argument("need at least two samples");
  }
  const std::size_t n = traj.samples.front().size();
  for (const auto& s : traj.samples) {
    if (s.size() != n) {
      throw std::invalid_argument("span contains events: particle count changes");
    }
  }
  const double t0 = traj.samples.front().time;
  const double t1 = traj.samples.back().time;
  const double lo = std::min(t0, t1);
  const double hi = std::max(t0, t1);
  for (const auto& evt : traj.events) {
    if (evt.kind == EventKind::termination) continue;
    if (evt.time > lo && evt.time < hi) {
      throw std::invalid_argument("span contains events");
    }
  }
}

struct LinearFit {
  double slope;
  double rms_residual;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  return LinearFit{slope, std::sqrt(ss / n)};
}

}  // namespace

WindingResult winding_probe(const Trajectory& traj) {
  require_uniform(traj);
  const std::size_t n = traj.samples.front().size();
  const WeightVector w = source_weights(traj.samples.front());

  std::vector<PairWinding> pairs;
  std::vector<double> theta0;  // initial principal angles, pair-ordered
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      pairs.push_back(PairWinding{k, l, 0.0});
      theta0.push_back(0.0);
    }
  }

  auto separation = [](const SystemState& s, std::size_t k, std::size_t l) {
    const Complex d = s.particles[k].position - s.particles[l].position;
    if (std::norm(d) < kMinSeparation * kMinSeparation) throw CoincidenceError(k, l);
    return d;
  };

  std::size_t p = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l, ++p) {
      theta0[p] = std::arg(separation(traj.samples.front(), k, l));
    }
  }

  auto g_value = [&](const std::vector<double>& accumulated) {
    double g = 0.0;
    std::size_t q = 0;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k + 1; l < n; ++l, ++q) {
        g -= w[k] * w[l] * (theta0[q] + accumulated[q]);
      }
    }
    return g;
  };

  std::vector<double> acc(pairs.size(), 0.0);
  const double g0 = g_value(acc);
  double g_drift = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    std::size_t q = 0;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k + 1; l < n; ++l, ++q) {
        const Complex prev = separation(traj.samples[i - 1], k, l);
        const Complex cur = separation(traj.samples[i], k, l);
        const double delta = std::arg(cur * std::conj(prev));
        if (std::abs(delta) > kUnwrapLimit) {
          throw ResolutionError("angle step above pi/2 between samples; refine sampling");
        }
        acc[q] += delta;
      }
    }
    g_drift = std::max(g_drift, std::abs(g_value(acc) - g0));
  }
  for (std::size_t q = 0; q < pairs.size(); ++q) pairs[q].delta_theta = acc[q];
  return WindingResult{std::move(pairs), g_drift};
}

InvariantReport invariant_drift_report(const Trajectory& traj,
                                       const WeightVector& weights) {
  require_uniform(traj);
  const std::size_t n = traj.samples.front().size();
  if (weights.size() != n) {
    throw std::invalid_argument("weight vector length does not match particle count");
  }

  InvariantReport rep;
  const bool pure = is_pure_source(traj.samples.front());
  rep.scope = pure ? "source" : "non-source";
  rep.idot_applicable = pure && weights == source_weights(traj.samples.front());

  const Complex z0 = linear_momentum(traj.samples.front());
  std::vector<double> times, inertia;
  times.reserve(traj.samples.size());
  inertia.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    rep.z_drift = std::max(rep.z_drift, std::abs(linear_momentum(s) - z0));
    const auto v = velocity_field(s);
    rep.max_abs_a = std::max(
        rep.max_abs_a, std::abs(angular_momentum(s.positions(), v, weights)));
    times.push_back(s.time);
    inertia.push_back(moment_of_inertia(s, weights));
  }

  const LinearFit fit = fit_line(times, inertia);
  rep.idot_slope = fit.slope;
  rep.idot_residual = fit.rms_residual;
  rep.virial_weights = virial(weights);
  rep.idot_predicted = -2.0 * rep.virial_weights;
  std::vector<Intensity> gam;
  for (const auto& p : traj.samples.front().particles) gam.push_back(p.intensity);
  rep.virial_intensity = virial(gam);

  rep.h_start = hamiltonian_h(traj.samples.front(), vortex_weights(traj.samples.front()));
  rep.h_end = hamiltonian_h(traj.samples.back(), vortex_weights(traj.samples.back()));
  rep.g_start = potential_g(traj.samples.front(), source_weights(traj.samples.front()));
  rep.g_end = potential_g(traj.samples.back(), source_weights(traj.samples.back()));

  WindingResult winding = winding_probe(traj);
  rep.winding = std::move(winding.pairs);
  rep.g_drift = winding.g_drift;
  rep.conjecture_holds =
      std::all_of(rep.winding.begin(), rep.winding.end(), [](const PairWinding& pw) {
        return std::abs(pw.delta_theta) < 2.0 * std::numbers::pi;
      });
  return rep;
}

double gradient_check(const SystemState& state, const WeightVector& weights) {
  if (weights.size() != state.size()) {
    throw std::invalid_argument("weight vector length does not match particle count");
  }
  const auto v = velocity_field(state);

  std::vector<Complex> gradient(state.size());
  for (std::size_t k = 0; k < state.size(); ++k) {
    SystemState plus = state;
    SystemState minus = state;
    plus.particles[k].position += kGradientStep;
    minus.particles[k].position -= kGradientStep;
    const double dx =
        (hamiltonian_h(plus, weights) - hamiltonian_h(minus, weights)) /
        (2.0 * kGradientStep);
    plus = state;
    minus = state;
    plus.particles[k].position += Complex{0.0, kGradientStep};
    minus.particles[k].position -= Complex{0.0, kGradientStep};
    const double dy =
        (hamiltonian_h(plus, weights) - hamiltonian_h(minus, weights)) /
        (2.0 * kGradientStep);
    gradient[k] = Complex{dx, dy};
  }

  double scale = 0.0;
  for (const auto& gk : gradient) scale = std::max(scale, std::abs(gk));
  scale = std::max(scale, 1e-12);
  double worst = 0.0;
  for (std::size_t k = 0; k < state.size(); ++k) {
    worst = std::max(worst, std::abs(weights[k] * v[k] - gradient[k]) / scale);
  }
  return worst;
}

}  // namespace pointflow
