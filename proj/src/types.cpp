#include "pointflow/types.hpp"

namespace pointflow {

std::vector<Complex> SystemState::positions() const {
  std::vector<Complex> out;
  out.reserve(particles.size());
  for (const auto& p : particles) out.push_back(p.position);
  return out;
}

std::vector<Complex> SystemState::intensity_values() const {
  std::vector<Complex> out;
  out.reserve(particles.size());
  for (const auto& p : particles) out.push_back(p.intensity.value());
  return out;
}

SystemState make_state(const std::vector<Complex>& positions,
                       const std::vector<Complex>& gammas, double time) {
  if (positions.size() != gammas.size()) {
    throw std::invalid_argument("positions and intensities differ in length");
  }
  SystemState state;
  state.time = time;
  state.particles.reserve(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    state.particles.push_back(Particle{positions[k], Intensity(gammas[k])});
  }
  return state;
}

}  // namespace pointflow
