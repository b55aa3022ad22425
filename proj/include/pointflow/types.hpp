#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pointflow {

using Complex = std::complex<double>;

/// Pairs closer than this are an invalid configuration, not a near-collision.
/// Near-collision handling (the collision radius) lives in IntegratorOptions.
inline constexpr double kMinSeparation = 1e-13;

class CoincidenceError : public std::domain_error {
 public:
  CoincidenceError(std::size_t i, std::size_t j)
      : std::domain_error("coincident particles " + std::to_string(i) +
                          " and " + std::to_string(j)),
        first(i),
        second(j) {}

  std::size_t first;
  std::size_t second;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampling too coarse for continuous angle accumulation.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complex interaction strength of one particle. The real part carries the
/// radial (sink/source) content, the imaginary part the rotational content:
/// outflow strength is -Re(value), vorticity is -Im(value).
class Intensity {
 public:
  explicit Intensity(Complex value) : value_(value) {
    if (value == Complex{0.0, 0.0}) {
      throw std::invalid_argument("intensity must be nonzero");
    }
  }

  /// q > 0 pushes fluid away from the particle: Gamma = -q.
  static Intensity from_source_strength(double q) {
    return Intensity(Complex{-q, 0.0});
  }

  /// omega > 0 circulates counterclockwise: Gamma = -i omega.
  static Intensity from_vorticity(double omega) {
    return Intensity(Complex{0.0, -omega});
  }

  Complex value() const { return value_; }

 private:
  Complex value_;
};

struct Particle {
  Complex position;
  Intensity intensity;
};

/// Instantaneous configuration: a time stamp plus particles with pairwise
/// distinct positions. Treated as an immutable value by every operation.
struct SystemState {
  double time = 0.0;
  std::vector<Particle> particles;

  std::size_t size() const { return particles.size(); }
  std::vector<Complex> positions() const;
  std::vector<Complex> intensity_values() const;
};

/// Real weights, one per particle, for the weighted invariants (angular
/// momentum, moment of inertia, virial, log-pair sums). Callers pick the
/// weights; see diagnostics for the standard choices.
using WeightVector = std::vector<double>;

SystemState make_state(const std::vector<Complex>& positions,
                       const std::vector<Complex>& gammas, double time = 0.0);

}  // namespace pointflow
