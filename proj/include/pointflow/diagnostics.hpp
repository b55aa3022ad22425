#pragma once

#include "pointflow/integrate.hpp"

namespace pointflow {

struct PairWinding {
  std::size_t first = 0;
  std::size_t second = 0;
  double delta_theta = 0.0;  // unwrapped theta(end) - theta(start)
};

struct WindingResult {
  std::vector<PairWinding> pairs;
  /// max_t |g(t) - g(0)| with g = -sum_{l>k} w_k w_l theta_kl and the real
  /// source intensities Re(Gamma) as weights.
  double g_drift = 0.0;
};

/// Quadrant-consistent accumulation of every pairwise angle arg(z_k - z_l)
/// across the samples. Throws ResolutionError when consecutive samples turn
/// any pair by more than pi/2 (refine the sampling), CoincidenceError when a
/// pair touches inside the span.
WindingResult winding_probe(const Trajectory& traj);

/// Measured drifts of every first integral and monotone quantity over an
/// event-free span. The weight vector drives A, I and the virial; the log-pair
/// sums use the standard weights derived from the intensities (vorticities
/// -Im Gamma for H, source strengths Re Gamma for G).
struct InvariantReport {
  std::string scope;            // "source" or "non-source"
  double z_drift = 0.0;         // max |Z(t) - Z(0)|
  double max_abs_a = 0.0;       // max |A(t)|
  double idot_slope = 0.0;      // least-squares slope of I(t)
  double idot_residual = 0.0;   // rms residual of the linear fit
  double idot_predicted = 0.0;  // -2 sum_{l<k} w_k w_l
  bool idot_applicable = false; // pure-source run with weights = Re(Gamma)
  double virial_weights = 0.0;
  Complex virial_intensity{0.0, 0.0};
  double h_start = 0.0;
  double h_end = 0.0;
  double g_start = 0.0;
  double g_end = 0.0;
  std::vector<PairWinding> winding;
  double g_drift = 0.0;
  bool conjecture_holds = false;  // every |delta_theta| < 2 pi
};

InvariantReport invariant_drift_report(const Trajectory& traj,
                                       const WeightVector& weights);

/// Compares w_k v_k against the central finite-difference gradient of
/// hamiltonian_h at step 1e-5 and returns the largest relative error. The
/// comparison is meaningful for pure-source states whose real intensities
/// equal the weights.
double gradient_check(const SystemState& state, const WeightVector& weights);

}  // namespace pointflow
