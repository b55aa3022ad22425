#pragma once

#include "pointflow/integrate.hpp"

namespace pointflow {

/// Translation-reduced configuration: conserved momentum, intensities (base
/// particle last) and the relative coordinates xi_i = z_base - z_i.
struct RelativeState {
  Complex momentum{0.0, 0.0};  // Z
  std::vector<Intensity> intensities;
  std::vector<Complex> xi;  // length N - 1
  double s = 0.0;           // rescaled time
  double t = 0.0;           // physical time

  std::size_t particle_count() const { return intensities.size(); }
};

/// Indices into xi of the binary collisions xi_i = 0 to desingularize.
using BlowupSelection = std::vector<std::size_t>;

/// Relative coordinates with respect to the last particle.
RelativeState to_relative(const SystemState& state);

/// Moves `base` into the last slot (order of the others preserved) so that
/// collisions with `base` appear as single coordinates vanishing.
SystemState with_base_last(const SystemState& state, std::size_t base);

/// Absolute positions from (Z, xi). Requires a nonzero total intensity; the
/// reconstruction satisfies sum_k Gamma_k z_k = Z by construction.
SystemState from_relative(const RelativeState& rel);

/// Reconstruction anchored at an explicit base-particle position; usable when
/// the total intensity vanishes. The stored momentum is ignored.
SystemState from_relative(const RelativeState& rel, Complex base_position);

/// d xi_i / dt expressed purely in differences of the xi.
std::vector<Complex> relative_field(const RelativeState& rel);

/// d xi_i / ds for the time scale dt/ds = prod_{j in sel} |xi_j|^2, with every
/// singular factor 1/conj(xi_j), j in sel, cancelled algebraically before
/// evaluation. Finite at the selected collisions; for a selected xi_i = 0 the
/// whole field vanishes term by term.
std::vector<Complex> blowup_field(const RelativeState& rel,
                                  const BlowupSelection& sel);

struct BlowupTrajectory {
  std::vector<RelativeState> samples;
  std::vector<Event> events;
};

/// Adaptive integration in the rescaled time s; the physical time rides along
/// as an augmented quadrature component with the same accuracy order.
BlowupTrajectory integrate_blowup(const RelativeState& rel, const BlowupSelection& sel,
                                  double s_end, const IntegratorOptions& opts);

struct TauChartPoint {
  double z;  // collinear relative separation
  double t;  // physical time, normalized so t(tau = 0) = 0
};

/// Collinear two-body chart for the time scale dt/dtau = z:
/// z(tau) = -S (tau - tau0) + z0, with the physical time recovered by
/// quadrature. The collision z = 0 sits at tau = tau0 + z0/S, where
/// t = S (tau0 + z0/S)^2 / 2.
TauChartPoint tau_regularize_two_body(double intensity_sum, double z0,
                                      double tau0, double tau);

}  // namespace pointflow
