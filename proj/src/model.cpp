#include "pointflow/model.hpp"

#include <cmath>

namespace pointflow {

namespace {

constexpr double kMinSeparationSq = kMinSeparation * kMinSeparation;

void check_sizes(std::size_t n, const WeightVector& weights) {
  if (weights.size() != n) {
    throw std::invalid_argument("weight vector length does not match particle count");
  }
}

double log_pair_sum(const SystemState& state, const WeightVector& weights) {
  const auto z = state.positions();
  check_sizes(z.size(), weights);
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    for (std::size_t l = k + 1; l < z.size(); ++l) {
      const double d2 = std::norm(z[k] - z[l]);
      if (d2 < kMinSeparationSq) throw CoincidenceError(k, l);
      sum -= weights[k] * weights[l] * 0.5 * std::log(d2);
    }
  }
  return sum;
}

}  // namespace

std::vector<Complex> velocity_field_raw(std::span<const Complex> positions,
                                        std::span<const Complex> gammas) {
  const std::size_t n = positions.size();
  std::vector<Complex> v(n, Complex{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      if (l == k) continue;
      const Complex d = positions[k] - positions[l];
      const double d2 = std::norm(d);
      if (d2 < kMinSeparationSq) throw CoincidenceError(std::min(k, l), std::max(k, l));
      v[k] -= gammas[l] * d / d2;
    }
  }
  return v;
}

std::vector<Complex> velocity_field(const SystemState& state) {
  const auto z = state.positions();
  const auto g = state.intensity_values();
  return velocity_field_raw(z, g);
}

double hamiltonian_h(const SystemState& state, const WeightVector& vorticities) {
  return log_pair_sum(state, vorticities);
}

double potential_g(const SystemState& state, const WeightVector& sources) {
  return log_pair_sum(state, sources);
}

Complex linear_momentum(const SystemState& state) {
  Complex z{0.0, 0.0};
  for (const auto& p : state.particles) z += p.intensity.value() * p.position;
  return z;
}

Complex total_intensity(const SystemState& state) {
  Complex g{0.0, 0.0};
  for (const auto& p : state.particles) g += p.intensity.value();
  return g;
}

std::optional<Complex> equivalent_center(const SystemState& state) {
  const Complex total = total_intensity(state);
  if (total == Complex{0.0, 0.0}) return std::nullopt;
  return linear_momentum(state) / total;
}

double angular_momentum(std::span<const Complex> positions,
                        std::span<const Complex> velocities,
                        const WeightVector& weights) {
  if (positions.size() != velocities.size() || positions.size() != weights.size()) {
    throw std::invalid_argument("angular_momentum: mismatched input lengths");
  }
  // (i z) . v with the planar dot product equals Im(conj(z) v).
  double a = 0.0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    a += weights[k] * std::imag(std::conj(positions[k]) * velocities[k]);
  }
  return a;
}

double moment_of_inertia(const SystemState& state, const WeightVector& weights) {
  check_sizes(state.size(), weights);
  double i = 0.0;
  for (std::size_t k = 0; k < state.size(); ++k) {
    i += weights[k] * std::norm(state.particles[k].position);
  }
  return i;
}

double virial(const WeightVector& weights) {
  double v = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (std::size_t l = k + 1; l < weights.size(); ++l) v += weights[k] * weights[l];
  }
  return v;
}

Complex virial(const std::vector<Intensity>& intensities) {
  Complex v{0.0, 0.0};
  for (std::size_t k = 0; k < intensities.size(); ++k) {
    for (std::size_t l = k + 1; l < intensities.size(); ++l) {
      v += intensities[k].value() * intensities[l].value();
    }
  }
  return v;
}

FieldDecomposition decompose_field(const SystemState& state) {
  const auto z = state.positions();
  const auto g = state.intensity_values();
  std::vector<Complex> vortex_g(g.size());
  std::vector<Complex> source_g(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    vortex_g[k] = Complex{0.0, g[k].imag()};
    source_g[k] = Complex{g[k].real(), 0.0};
  }
  return FieldDecomposition{velocity_field_raw(z, vortex_g),
                            velocity_field_raw(z, source_g)};
}

WeightVector source_weights(const SystemState& state) {
  WeightVector w;
  w.reserve(state.size());
  for (const auto& p : state.particles) w.push_back(p.intensity.value().real());
  return w;
}

WeightVector vortex_weights(const SystemState& state) {
  WeightVector w;
  w.reserve(state.size());
  for (const auto& p : state.particles) w.push_back(-p.intensity.value().imag());
  return w;
}

bool is_pure_source(const SystemState& state) {
  for (const auto& p : state.particles) {
    if (p.intensity.value().imag() != 0.0) return false;
  }
  return true;
}

}  // namespace pointflow
