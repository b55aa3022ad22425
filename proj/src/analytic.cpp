#include "pointflow/analytic.hpp"

#include <cmath>

namespace pointflow {

std::optional<double> collision_time(Complex intensity_sum, double r0) {
  if (r0 <= 0.0) throw std::invalid_argument("r0 must be positive");
  const double re = intensity_sum.real();
  if (re <= 0.0) return std::nullopt;
  return r0 * r0 / (2.0 * re);
}

TwoBodySolution::TwoBodySolution(Complex s, double initial_separation,
                                 double initial_angle)
    : intensity_sum(s), r0(initial_separation), theta0(initial_angle) {
  if (r0 <= 0.0) throw std::invalid_argument("r0 must be positive");
}

std::optional<double> TwoBodySolution::collision() const {
  return collision_time(intensity_sum, r0);
}

PolarPoint two_body_polar(const TwoBodySolution& sol, double t) {
  const double re = sol.intensity_sum.real();
  const double im = sol.intensity_sum.imag();
  const double r2 = sol.r0 * sol.r0 - 2.0 * t * re;
  if (r2 <= 0.0) throw std::domain_error("time at or beyond the collision");
  const double r = std::sqrt(r2);
  double theta = sol.theta0;
  if (re != 0.0) {
    // integral of -Im S / r(t)^2
    theta += im / (2.0 * re) * std::log1p(-2.0 * t * re / (sol.r0 * sol.r0));
  } else {
    theta -= im / (sol.r0 * sol.r0) * t;
  }
  return PolarPoint{r, theta};
}

Complex two_body_state(const TwoBodySolution& sol, double t) {
  const PolarPoint p = two_body_polar(sol, t);
  return std::polar(p.r, p.theta);
}

double single_source_radius(double gamma, double r0, double t) {
  if (r0 <= 0.0) throw std::invalid_argument("r0 must be positive");
  const double r2 = r0 * r0 - 2.0 * gamma * t;
  if (r2 <= 0.0) throw std::domain_error("time at or beyond the collision");
  return std::sqrt(r2);
}

Complex blowup_two_body(Complex K, Complex S, double s) {
  return K * std::exp(-S * s);
}

double blowup_two_body_time(Complex K, Complex S, double s) {
  const double k2 = std::norm(K);
  const double re = S.real();
  if (re == 0.0) return k2 * s;
  return k2 * (1.0 - std::exp(-2.0 * re * s)) / (2.0 * re);
}

}  // namespace pointflow
