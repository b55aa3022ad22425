#pragma once

// Shared Dormand-Prince 5(4) stepping core for the physical-time and
// blown-up integrators. Operates on flat vectors of complex components.

#include <algorithm>
#include <cmath>
#include <vector>

#include "pointflow/types.hpp"

namespace pointflow::detail {

inline std::vector<Complex> axpy(const std::vector<Complex>& y, double c,
                                 const std::vector<Complex>& k) {
  std::vector<Complex> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + c * k[i];
  return out;
}

template <typename Field>
std::vector<Complex> rk4_vec(const Field& f, const std::vector<Complex>& y, double h) {
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, 0.5 * h, k1));
  const auto k3 = f(axpy(y, 0.5 * h, k2));
  const auto k4 = f(axpy(y, h, k3));
  std::vector<Complex> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

struct Dp45Result {
  std::vector<Complex> y;
  double error_norm;  // <= 1 means the step meets the tolerance
};

template <typename Field>
Dp45Result dp45_step(const Field& f, const std::vector<Complex>& y, double h,
                     double abs_tol, double rel_tol) {
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, h * (1.0 / 5.0), k1));
  std::vector<Complex> tmp(y.size());

  auto stage = [&](std::initializer_list<std::pair<double, const std::vector<Complex>*>> terms) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      Complex acc = y[i];
      for (const auto& [c, k] : terms) acc += h * c * (*k)[i];
      tmp[i] = acc;
    }
    return f(tmp);
  };

  const auto k3 = stage({{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}});
  const auto k4 = stage({{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}});
  const auto k5 = stage({{19372.0 / 6561.0, &k1},
                         {-25360.0 / 2187.0, &k2},
                         {64448.0 / 6561.0, &k3},
                         {-212.0 / 729.0, &k4}});
  const auto k6 = stage({{9017.0 / 3168.0, &k1},
                         {-355.0 / 33.0, &k2},
                         {46732.0 / 5247.0, &k3},
                         {49.0 / 176.0, &k4},
                         {-5103.0 / 18656.0, &k5}});

  static constexpr double b[6] = {35.0 / 384.0,     0.0,          500.0 / 1113.0,
                                  125.0 / 192.0,    -2187.0 / 6784.0, 11.0 / 84.0};
  std::vector<Complex> y5(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y5[i] = y[i] + h * (b[0] * k1[i] + b[2] * k3[i] + b[3] * k4[i] +
                        b[4] * k5[i] + b[5] * k6[i]);
  }
  const auto k7 = f(y5);

  // y5 - y4 weights of the embedded pair
  static constexpr double e[7] = {71.0 / 57600.0,  0.0,      -71.0 / 16695.0,
                                  71.0 / 1920.0,   -17253.0 / 339200.0,
                                  22.0 / 525.0,    -1.0 / 40.0};
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const Complex err = h * (e[0] * k1[i] + e[2] * k3[i] + e[3] * k4[i] +
                             e[4] * k5[i] + e[5] * k6[i] + e[6] * k7[i]);
    const double sc =
        abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
    const double q = std::abs(err) / sc;
    sum += q * q;
  }
  const double norm = y.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(y.size()));
  return Dp45Result{std::move(y5), norm};
}

/// Step-size multiplier for the classic order-5 controller.
inline double step_factor(double error_norm) {
  if (error_norm == 0.0) return 5.0;
  return std::clamp(0.9 * std::pow(error_norm, -0.2), 0.2, 5.0);
}

}  // namespace pointflow::detail
