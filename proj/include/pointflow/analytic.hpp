#pragma once

#include <optional>

#include "pointflow/types.hpp"

namespace pointflow {

/// Forward collision time r0^2 / (2 Re S) of the relative two-body motion,
/// or empty when Re S <= 0 (no contraction).
std::optional<double> collision_time(Complex intensity_sum, double r0);

/// Closed-form relative motion z = r e^{i theta} of a particle pair,
/// dz/dt = -S z / |z|^2 with S = Gamma_1 + Gamma_2.
struct TwoBodySolution {
  Complex intensity_sum{0.0, 0.0};  // S
  double r0 = 1.0;                  // initial separation, > 0
  double theta0 = 0.0;              // initial angle

  TwoBodySolution(Complex s, double initial_separation, double initial_angle = 0.0);

  std::optional<double> collision() const;
};

struct PolarPoint {
  double r;
  double theta;  // continuous branch, not reduced mod 2 pi
};

/// Separation and unwrapped angle at time t. Throws std::domain_error at or
/// beyond the collision time.
PolarPoint two_body_polar(const TwoBodySolution& sol, double t);

/// Relative position at time t.
Complex two_body_state(const TwoBodySolution& sol, double t);

/// r(t) = sqrt(r0^2 - 2 gamma t) for the radial single source/sink motion.
/// gamma > 0 contracts toward the center, gamma < 0 expands.
double single_source_radius(double gamma, double r0, double t);

/// Blown-up two-body chart z(s) = K e^{-S s}.
Complex blowup_two_body(Complex K, Complex S, double s);

/// Physical time matching blowup_two_body: the quadrature of dt/ds = |z|^2.
double blowup_two_body_time(Complex K, Complex S, double s);

}  // namespace pointflow
