#include <cmath>

#include <doctest.h>

#include "pointflow/analytic.hpp"

using namespace pointflow;

namespace {
const Complex I{0.0, 1.0};
}

TEST_CASE("collision time of the relative motion") {
  CHECK(collision_time(Complex{2.0, 0.0}, 1.0).value() == doctest::Approx(0.25));
  CHECK(!collision_time(Complex{-2.0, 0.0}, 1.0).has_value());
  CHECK(!collision_time(2.0 * I, 1.0).has_value());
  CHECK_THROWS_AS(collision_time(Complex{1.0, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("two-body closed form") {
  SUBCASE("contracting spiral") {
    const TwoBodySolution sol(Complex{2.0, 2.0}, 1.0, 0.0);
    CHECK(sol.collision().value() == doctest::Approx(0.25));
    const PolarPoint p = two_body_polar(sol, 0.1875);
    CHECK(p.r == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.theta == doctest::Approx(0.5 * std::log(0.25)).epsilon(1e-12));
    CHECK(p.theta == doctest::Approx(-0.6931471805599453).epsilon(1e-12));
  }
  SUBCASE("pure vortex circles") {
    const TwoBodySolution sol(2.0 * I, 1.0, 0.0);
    for (double t : {0.3, 1.0, 7.5}) {
      const PolarPoint p = two_body_polar(sol, t);
      CHECK(p.r == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(p.theta == doctest::Approx(-2.0 * t).epsilon(1e-14));
    }
  }
  SUBCASE("pure source rays") {
    const TwoBodySolution sol(Complex{2.0, 0.0}, 1.0, 0.7);
    const PolarPoint p = two_body_polar(sol, 0.1);
    CHECK(p.theta == 0.7);
    CHECK(p.r == doctest::Approx(std::sqrt(0.6)).epsilon(1e-14));
  }
  SUBCASE("zero intensity sum freezes the pair") {
    const TwoBodySolution sol(Complex{0.0, 0.0}, 1.0, 0.3);
    for (double t : {0.0, 1.0, 100.0}) {
      CHECK(std::abs(two_body_state(sol, t) - std::polar(1.0, 0.3)) < 1e-15);
    }
  }
  SUBCASE("beyond the collision") {
    const TwoBodySolution sol(Complex{2.0, 0.0}, 1.0);
    CHECK_THROWS_AS(two_body_polar(sol, 0.25), std::domain_error);
    CHECK_THROWS_AS(two_body_polar(sol, 0.3), std::domain_error);
  }
}

TEST_CASE("log-spiral identity r = r0 exp((Re S / Im S) dtheta)") {
  const TwoBodySolution sol(Complex{2.0, 2.0}, 1.0, 0.4);
  const double ratio = sol.intensity_sum.real() / sol.intensity_sum.imag();
  for (int i = 1; i <= 40; ++i) {
    const double t = 0.99 * 0.25 * i / 40.0;
    const PolarPoint p = two_body_polar(sol, t);
    const double predicted = sol.r0 * std::exp(ratio * (p.theta - sol.theta0));
    CHECK(std::abs(p.r - predicted) <= 1e-10 * p.r);
  }
}

TEST_CASE("winding diverges approaching the collision") {
  const TwoBodySolution sol(Complex{2.0, 2.0}, 1.0, 0.0);
  const double t_star = sol.collision().value();
  // each decade closer to t* adds (Im S / (2 Re S)) ln 10 of winding
  double prev = std::abs(two_body_polar(sol, t_star - 1e-3).theta);
  for (int k = 4; k <= 10; ++k) {
    const double cur = std::abs(two_body_polar(sol, t_star - std::pow(10.0, -k)).theta);
    CHECK(cur - prev == doctest::Approx(0.5 * std::log(10.0)).epsilon(1e-4));
    prev = cur;
  }
}

TEST_CASE("single source radial law") {
  CHECK(single_source_radius(1.0, 1.0, 0.375) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(single_source_radius(-1.0, 1.0, 1.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(single_source_radius(1.0, 1.0, 0.0) == 1.0);
  CHECK_THROWS_AS(single_source_radius(1.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("blown-up two-body chart") {
  CHECK(std::abs(blowup_two_body(1.0, 2.0, 1.0) - std::exp(-2.0)) < 1e-15);
  CHECK(std::abs(blowup_two_body(1.0, 2.0, 1.0) - 0.1353352832366127) < 1e-15);
  for (double s : {0.1, 1.0, 5.0}) {
    CHECK(std::abs(blowup_two_body(1.0, 2.0 * I, s)) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(blowup_two_body(Complex{0.3, -0.4}, Complex{1.0, 2.0}, 0.0) == Complex{0.3, -0.4});
}

TEST_CASE("blow-up chart composed with t(s) reproduces the physical solution") {
  const Complex K = std::polar(1.0, 0.4);
  const Complex S{2.0, 2.0};
  const TwoBodySolution sol(S, 1.0, 0.4);
  for (int i = 0; i <= 30; ++i) {
    const double s = 0.1 * i;
    const double t = blowup_two_body_time(K, S, s);
    CHECK(std::abs(blowup_two_body(K, S, s) - two_body_state(sol, t)) <= 1e-9);
  }
  // pure vortex: physical time is linear in s
  CHECK(blowup_two_body_time(2.0, 2.0 * I, 3.0) == doctest::Approx(12.0).epsilon(1e-14));
}
