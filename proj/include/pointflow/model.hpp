#pragma once

#include <optional>
#include <span>

#include "pointflow/types.hpp"

namespace pointflow {

/// Interaction velocities dz_k/dt = -sum_{l != k} Gamma_l (z_k - z_l) / |z_k - z_l|^2.
/// A single particle has zero velocity. Throws CoincidenceError naming the
/// offending pair when two positions are closer than kMinSeparation.
std::vector<Complex> velocity_field(const SystemState& state);

/// Same field on raw positions and complex strengths; building block for the
/// decomposed and relative-coordinate variants.
std::vector<Complex> velocity_field_raw(std::span<const Complex> positions,
                                        std::span<const Complex> gammas);

/// -sum_{l > k} w_k w_l ln|z_k - z_l| with the vortex weights w.
double hamiltonian_h(const SystemState& state, const WeightVector& vorticities);

/// The same log-pair sum with source weights; its gradient drives the
/// radial part of the motion.
double potential_g(const SystemState& state, const WeightVector& sources);

/// Z = sum_k Gamma_k z_k. Conserved along every solution.
Complex linear_momentum(const SystemState& state);

Complex total_intensity(const SystemState& state);

/// Z / sum_k Gamma_k, or empty when the total intensity vanishes.
std::optional<Complex> equivalent_center(const SystemState& state);

/// A = sum_k w_k (i z_k) . v_k with the planar dot product.
double angular_momentum(std::span<const Complex> positions,
                        std::span<const Complex> velocities,
                        const WeightVector& weights);

/// I = sum_k w_k |z_k|^2.
double moment_of_inertia(const SystemState& state, const WeightVector& weights);

/// sum_{l < k} w_k w_l.
double virial(const WeightVector& weights);
Complex virial(const std::vector<Intensity>& intensities);

struct FieldDecomposition {
  std::vector<Complex> vortex;  // field of the strengths i Im(Gamma_k)
  std::vector<Complex> source;  // field of the strengths Re(Gamma_k)
};

/// Splits the velocity field into rotational and radial parts. By linearity
/// the parts sum to velocity_field(state).
FieldDecomposition decompose_field(const SystemState& state);

/// Re(Gamma_k): the real source intensities.
WeightVector source_weights(const SystemState& state);

/// -Im(Gamma_k): the vorticities.
WeightVector vortex_weights(const SystemState& state);

/// True when every intensity is real (no rotational content).
bool is_pure_source(const SystemState& state);

}  // namespace pointflow
