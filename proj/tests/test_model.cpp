#include <cmath>
#include <numbers>

#include <doctest.h>

#include "pointflow/model.hpp"
#include "test_helpers.hpp"

using namespace pointflow;

namespace {
const Complex I{0.0, 1.0};
}

TEST_CASE("intensity factories and the nonzero invariant") {
  CHECK(Intensity::from_source_strength(2.0).value() == Complex{-2.0, 0.0});
  CHECK(Intensity::from_vorticity(1.0).value() == Complex{0.0, -1.0});
  CHECK_THROWS_AS(Intensity(Complex{0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Intensity::from_vorticity(0.0), std::invalid_argument);
}

TEST_CASE("velocity field on worked pairs") {
  SUBCASE("equal sinks approach each other") {
    const auto v = velocity_field(make_state({0.0, 1.0}, {1.0, 1.0}));
    CHECK(v[0] == Complex{1.0, 0.0});
    CHECK(v[1] == Complex{-1.0, 0.0});
  }
  SUBCASE("equal vortices rotate rigidly") {
    const auto v = velocity_field(make_state({0.0, 1.0}, {-I, -I}));
    CHECK(v[0] == -I);
    CHECK(v[1] == I);
  }
  SUBCASE("mixed intensities") {
    const auto v = velocity_field(make_state({0.0, 1.0}, {1.0 + I, 1.0 + I}));
    CHECK(v[0] == Complex{1.0, 1.0});
    CHECK(v[1] == Complex{-1.0, -1.0});
  }
  SUBCASE("single particle does not move") {
    const auto v = velocity_field(make_state({0.5 + 0.5 * I}, {1.0}));
    CHECK(v[0] == Complex{0.0, 0.0});
  }
}

TEST_CASE("coincident positions raise a domain error naming the pair") {
  const auto state = make_state({0.0, 1.0, 1.0 + 1e-15 * I}, {1.0, 1.0, 1.0});
  try {
    velocity_field(state);
    FAIL("expected CoincidenceError");
  } catch (const CoincidenceError& e) {
    CHECK(e.first == 1);
    CHECK(e.second == 2);
  }
  CHECK_THROWS_AS(hamiltonian_h(state, {1.0, 1.0, 1.0}), CoincidenceError);
}

TEST_CASE("log-pair sums") {
  CHECK(hamiltonian_h(make_state({0.0, 1.0}, {1.0, 1.0}), {1.0, 1.0}) == 0.0);
  CHECK(hamiltonian_h(make_state({0.0, std::numbers::e}, {1.0, 1.0}), {1.0, 1.0}) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  // unit-side equilateral triangle: every log vanishes
  const double r = 1.0 / std::sqrt(3.0);
  const auto triangle = make_state(
      {r, r * std::polar(1.0, 2.0 * std::numbers::pi / 3.0),
       r * std::polar(1.0, -2.0 * std::numbers::pi / 3.0)},
      {1.0, 1.0, 1.0});
  CHECK(std::abs(hamiltonian_h(triangle, {1.0, 1.0, 1.0})) < 1e-14);

  CHECK(potential_g(make_state({0.0, 1.0}, {2.0, 3.0}), {2.0, 3.0}) == 0.0);
  CHECK(potential_g(make_state({0.0, std::numbers::e}, {1.0, 1.0}), {1.0, 1.0}) ==
        doctest::Approx(-1.0).epsilon(1e-14));

  CHECK_THROWS_AS(hamiltonian_h(make_state({0.0, 1.0}, {1.0, 1.0}), {1.0}),
                  std::invalid_argument);
}

TEST_CASE("hamiltonian is translation invariant") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto state = testing::random_pure_source_state(rng, 2 + trial % 5);
    const auto w = source_weights(state);
    const double h0 = hamiltonian_h(state, w);
    SystemState shifted = state;
    const Complex offset{1.7, -0.3};
    for (auto& p : shifted.particles) p.position += offset;
    CHECK(std::abs(hamiltonian_h(shifted, w) - h0) <= 1e-12 * (1.0 + std::abs(h0)));
  }
}

TEST_CASE("linear momentum and the equivalent center") {
  const auto pair = make_state({0.0, 1.0}, {1.0, 1.0});
  CHECK(linear_momentum(pair) == Complex{1.0, 0.0});
  CHECK(equivalent_center(pair).value() == Complex{0.5, 0.0});

  const auto zero_sum = make_state({0.0, 1.0}, {1.0, -1.0});
  CHECK(linear_momentum(zero_sum) == Complex{-1.0, 0.0});
  CHECK(!equivalent_center(zero_sum).has_value());

  const auto rebuilt = make_state(
      {-0.5 + 0.25 * I, 0.5 - 0.75 * I, 0.5 + 0.25 * I}, {2.0, 1.0, 1.0});
  CHECK(std::abs(linear_momentum(rebuilt)) < 1e-15);
}

TEST_CASE("angular momentum") {
  SUBCASE("definition on a single particle") {
    CHECK(angular_momentum(std::vector<Complex>{1.0}, std::vector<Complex>{I}, {1.0}) == 1.0);
  }
  SUBCASE("vanishes for pure-source motion") {
    const auto state = make_state({0.2 + 0.1 * I, -0.4, 0.3 - 0.5 * I}, {1.0, -2.0, 3.0});
    const auto v = velocity_field(state);
    const auto z = state.positions();
    double scale = 0.0;
    const WeightVector w{1.0, -2.0, 3.0};
    for (std::size_t k = 0; k < 3; ++k) {
      scale += std::abs(w[k]) * std::abs(z[k]) * std::abs(v[k]);
    }
    CHECK(std::abs(angular_momentum(z, v, w)) <= 1e-12 * scale);
  }
  SUBCASE("random pure-source states") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
      const auto state = testing::random_pure_source_state(rng, 2 + trial % 7);
      const auto v = velocity_field(state);
      const auto z = state.positions();
      const auto w = source_weights(state);
      double scale = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        scale += std::abs(w[k]) * std::abs(z[k]) * std::abs(v[k]);
      }
      CHECK(std::abs(angular_momentum(z, v, w)) <= 1e-12 * scale);
    }
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(
        angular_momentum(std::vector<Complex>{1.0}, std::vector<Complex>{I, I}, {1.0}),
        std::invalid_argument);
  }
}

TEST_CASE("moment of inertia") {
  CHECK(moment_of_inertia(make_state({0.0, 1.0}, {1.0, 1.0}), {1.0, 1.0}) == 1.0);
  const double r = 1.0 / std::sqrt(3.0);
  const auto triangle = make_state(
      {r, r * std::polar(1.0, 2.0 * std::numbers::pi / 3.0),
       r * std::polar(1.0, -2.0 * std::numbers::pi / 3.0)},
      {1.0, 1.0, 1.0});
  CHECK(moment_of_inertia(triangle, {1.0, 1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(moment_of_inertia(make_state({1.0, I}, {1.0, -1.0}), {1.0, -1.0}) == 0.0);
}

TEST_CASE("virial") {
  CHECK(virial(WeightVector{1.0, 1.0, 1.0}) == 3.0);
  CHECK(virial(WeightVector{1.0, -1.0}) == -1.0);
  const std::vector<Intensity> gam{Intensity(1.0 + I), Intensity(1.0 - I)};
  CHECK(virial(gam) == Complex{2.0, 0.0});
}

TEST_CASE("field decomposition") {
  SUBCASE("purely real intensities have no vortex part") {
    const auto parts = decompose_field(make_state({0.0, 1.0}, {1.0, 1.0}));
    const auto full = velocity_field(make_state({0.0, 1.0}, {1.0, 1.0}));
    CHECK(parts.vortex[0] == Complex{0.0, 0.0});
    CHECK(parts.vortex[1] == Complex{0.0, 0.0});
    CHECK(parts.source[0] == full[0]);
    CHECK(parts.source[1] == full[1]);
  }
  SUBCASE("purely imaginary intensities have no source part") {
    const auto parts = decompose_field(make_state({0.0, 1.0}, {-I, -I}));
    CHECK(parts.source[0] == Complex{0.0, 0.0});
    CHECK(parts.vortex[0] == -I);
  }
  SUBCASE("parts sum to the full field") {
    const auto parts = decompose_field(make_state({0.0, 1.0}, {1.0 + I, 1.0 + I}));
    CHECK(parts.vortex[0] + parts.source[0] == Complex{1.0, 1.0});
    CHECK(parts.vortex[1] + parts.source[1] == Complex{-1.0, -1.0});
  }
  SUBCASE("linearity on random mixed states") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      const auto state = testing::random_mixed_state(rng, 2 + trial % 7);
      const auto parts = decompose_field(state);
      const auto full = velocity_field(state);
      for (std::size_t k = 0; k < full.size(); ++k) {
        CHECK(std::abs(parts.vortex[k] + parts.source[k] - full[k]) <=
              1e-14 * (1.0 + std::abs(full[k])));
      }
    }
  }
}

TEST_CASE("the intensity-weighted velocities sum to zero") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto state = testing::random_mixed_state(rng, 2 + trial % 7);
    const auto v = velocity_field(state);
    const auto g = state.intensity_values();
    Complex total{0.0, 0.0};
    double scale = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      total += g[k] * v[k];
      scale += std::abs(g[k]) * std::abs(v[k]);
    }
    CHECK(std::abs(total) <= 1e-12 * scale);
  }
}

TEST_CASE("weighted velocities equal the gradient of the log-pair sum") {
  // worked pair: w_1 v_1 = +1 = dH/dx_1
  const auto pair = make_state({0.0, 1.0}, {1.0, 1.0});
  const auto v = velocity_field(pair);
  const double h = 1e-5;
  auto h_of = [&](Complex shift0) {
    SystemState s = pair;
    s.particles[0].position += shift0;
    return hamiltonian_h(s, {1.0, 1.0});
  };
  const double dhdx = (h_of(h) - h_of(-h)) / (2.0 * h);
  const double dhdy = (h_of(h * I) - h_of(-h * I)) / (2.0 * h);
  CHECK(std::abs(v[0].real() - dhdx) <= 1e-8);
  CHECK(std::abs(v[0].imag() - dhdy) <= 1e-8);
  CHECK(dhdx == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("standard weights from intensities") {
  const auto state = make_state({0.0, 1.0}, {1.0 + 2.0 * I, 3.0 - I});
  CHECK(source_weights(state) == WeightVector{1.0, 3.0});
  CHECK(vortex_weights(state) == WeightVector{-2.0, 1.0});
  CHECK(!is_pure_source(state));
  CHECK(is_pure_source(make_state({0.0, 1.0}, {1.0, -2.0})));
}
