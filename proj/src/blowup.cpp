#include "pointflow/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dp45.hpp"

namespace pointflow {

namespace {

constexpr double kMinSeparationSq = kMinSeparation * kMinSeparation;

void check_selection(const BlowupSelection& sel, std::size_t coord_count) {
  if (sel.empty()) throw std::invalid_argument("blow-up selection must be nonempty");
  std::vector<std::size_t> sorted = sel;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate blow-up selection index");
  }
  if (sorted.back() >= coord_count) {
    throw std::invalid_argument("blow-up selection index out of range");
  }
}

std::vector<Complex> intensity_values(const std::vector<Intensity>& intensities) {
  std::vector<Complex> g;
  g.reserve(intensities.size());
  for (const auto& i : intensities) g.push_back(i.value());
  return g;
}

}  // namespace

RelativeState to_relative(const SystemState& state) {
  if (state.size() < 2) {
    throw std::invalid_argument("relative coordinates need at least two particles");
  }
  RelativeState rel;
  rel.momentum = linear_momentum(state);
  rel.t = state.time;
  rel.s = 0.0;
  rel.intensities.reserve(state.size());
  for (const auto& p : state.particles) rel.intensities.push_back(p.intensity);
  const Complex base = state.particles.back().position;
  rel.xi.reserve(state.size() - 1);
  for (std::size_t i = 0; i + 1 < state.size(); ++i) {
    rel.xi.push_back(base - state.particles[i].position);
  }
  return rel;
}

SystemState with_base_last(const SystemState& state, std::size_t base) {
  if (base >= state.size()) throw std::invalid_argument("base index out of range");
  SystemState out;
  out.time = state.time;
  out.particles.reserve(state.size());
  for (std::size_t k = 0; k < state.size(); ++k) {
    if (k != base) out.particles.push_back(state.particles[k]);
  }
  out.particles.push_back(state.particles[base]);
  return out;
}

SystemState from_relative(const RelativeState& rel) {
  const auto g = intensity_values(rel.intensities);
  Complex total{0.0, 0.0};
  double total_abs = 0.0;
  for (const auto& gi : g) {
    total += gi;
    total_abs += std::abs(gi);
  }
  if (std::abs(total) <= 1e-12 * total_abs) {
    throw std::domain_error(
        "equivalent center undefined: total intensity vanishes (supply an anchor)");
  }
  // Solve sum_k Gamma_k z_k = Z together with z_base - z_i = xi_i.
  Complex weighted_xi{0.0, 0.0};
  for (std::size_t i = 0; i < rel.xi.size(); ++i) weighted_xi += g[i] * rel.xi[i];
  const Complex base = rel.momentum / total + weighted_xi / total;
  return from_relative(rel, base);
}

SystemState from_relative(const RelativeState& rel, Complex base_position) {
  if (rel.intensities.size() != rel.xi.size() + 1) {
    throw std::invalid_argument("relative state sizes inconsistent");
  }
  SystemState out;
  out.time = rel.t;
  out.particles.reserve(rel.intensities.size());
  for (std::size_t i = 0; i < rel.xi.size(); ++i) {
    out.particles.push_back(Particle{base_position - rel.xi[i], rel.intensities[i]});
  }
  out.particles.push_back(Particle{base_position, rel.intensities.back()});
  return out;
}

std::vector<Complex> relative_field(const RelativeState& rel) {
  const auto g = intensity_values(rel.intensities);
  const auto& xi = rel.xi;
  const std::size_t m = xi.size();
  const std::size_t base_index = m;  // particle index of the base
  const Complex g_base = g[m];

  std::vector<Complex> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (std::norm(xi[i]) < kMinSeparationSq) throw CoincidenceError(i, base_index);
    Complex acc = -(g[i] + g_base) / std::conj(xi[i]);
    for (std::size_t l = 0; l < m; ++l) {
      if (l == i) continue;
      if (std::norm(xi[l]) < kMinSeparationSq) throw CoincidenceError(l, base_index);
      const Complex diff = std::conj(xi[l]) - std::conj(xi[i]);
      if (std::norm(diff) < kMinSeparationSq) {
        throw CoincidenceError(std::min(i, l), std::max(i, l));
      }
      acc -= g[l] / std::conj(xi[l]);
      acc += g[l] / diff;
    }
    out[i] = acc;
  }
  return out;
}

std::vector<Complex> blowup_field(const RelativeState& rel, const BlowupSelection& sel) {
  const auto g = intensity_values(rel.intensities);
  const auto& xi = rel.xi;
  const std::size_t m = xi.size();
  check_selection(sel, m);

  std::vector<bool> selected(m, false);
  for (std::size_t idx : sel) selected[idx] = true;

  // rescale_without[i] = prod_{j in sel, j != i} |xi_j|^2; the full factor is
  // rescale_without[i] * |xi_i|^2 for selected i.
  std::vector<double> rescale_without(m, 1.0);
  double rescale = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (!selected[j]) continue;
    const double f = std::norm(xi[j]);
    rescale *= f;
    for (std::size_t i = 0; i < m; ++i) {
      if (i != j) rescale_without[i] *= f;
    }
  }

  // -G / conj(xi_l) rescaled, with the singular factor cancelled when l is a
  // selected coordinate.
  auto radial_term = [&](Complex strength, std::size_t l) {
    if (selected[l]) return -strength * xi[l] * rescale_without[l];
    const double n = std::norm(xi[l]);
    if (n < kMinSeparationSq) throw CoincidenceError(l, m);
    return -strength * rescale * xi[l] / n;
  };

  std::vector<Complex> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    Complex acc = radial_term(g[i] + g[m], i);
    for (std::size_t l = 0; l < m; ++l) {
      if (l == i) continue;
      acc += radial_term(g[l], l);
      const Complex diff = std::conj(xi[l]) - std::conj(xi[i]);
      if (std::norm(diff) < kMinSeparationSq) {
        throw CoincidenceError(std::min(i, l), std::max(i, l));
      }
      acc += g[l] * rescale / diff;
    }
    out[i] = acc;
  }
  return out;
}

BlowupTrajectory integrate_blowup(const RelativeState& rel, const BlowupSelection& sel,
                                  double s_end, const IntegratorOptions& opts) {
  opts.validate();
  check_selection(sel, rel.xi.size());
  if (!(s_end > rel.s)) throw std::invalid_argument("s_end must exceed the initial s");

  const std::size_t m = rel.xi.size();
  std::vector<bool> is_selected(m, false);
  for (std::size_t idx : sel) is_selected[idx] = true;

  // Augmented state: the m relative coordinates plus the physical time in the
  // real part of one extra component.
  auto field = [&](const std::vector<Complex>& y) {
    RelativeState probe = rel;
    probe.xi.assign(y.begin(), y.begin() + m);
    std::vector<Complex> dy(m + 1);
    auto dxi = blowup_field(probe, sel);
    std::copy(dxi.begin(), dxi.end(), dy.begin());
    double rescale = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (is_selected[j]) rescale *= std::norm(y[j]);
    }
    dy[m] = Complex{rescale, 0.0};
    return dy;
  };

  auto sample_from = [&](double s, const std::vector<Complex>& y) {
    RelativeState st = rel;
    st.s = s;
    st.t = y[m].real();
    st.xi.assign(y.begin(), y.begin() + m);
    return st;
  };

  BlowupTrajectory out;
  std::vector<Complex> y(m + 1);
  std::copy(rel.xi.begin(), rel.xi.end(), y.begin());
  y[m] = Complex{rel.t, 0.0};
  double s = rel.s;
  out.samples.push_back(sample_from(s, y));

  double h = std::min(opts.initial_step, s_end - s);
  long steps = 0;
  while (s_end - s > std::max(opts.step_floor,
                              4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(s_end), 1.0))) {
    if (++steps > opts.max_steps) throw NumericalError("max step count exceeded");
    if (s + h > s_end) h = s_end - s;

    double err;
    std::vector<Complex> y_new;
    try {
      auto r = detail::dp45_step(field, y, h, opts.abs_tol, opts.rel_tol);
      err = r.error_norm;
      y_new = std::move(r.y);
    } catch (const CoincidenceError&) {
      err = std::numeric_limits<double>::infinity();
    }

    if (err <= 1.0) {
      y = std::move(y_new);
      s += h;
      out.samples.push_back(sample_from(s, y));
      h *= detail::step_factor(err);
    } else {
      h *= std::isfinite(err) ? detail::step_factor(err) : 0.2;
      if (h < opts.step_floor) {
        Event evt;
        evt.kind = EventKind::termination;
        evt.time = y[m].real();
        evt.detail = "step floor reached in the blow-up chart";
        out.events.push_back(evt);
        return out;
      }
    }
  }
  return out;
}

TauChartPoint tau_regularize_two_body(double intensity_sum, double z0,
                                      double tau0, double tau) {
  if (intensity_sum == 0.0) {
    throw std::domain_error("tau chart undefined for zero intensity sum");
  }
  const double z = -intensity_sum * (tau - tau0) + z0;
  const double t =
      -0.5 * intensity_sum * tau * tau + (intensity_sum * tau0 + z0) * tau;
  return TauChartPoint{z, t};
}

}  // namespace pointflow
