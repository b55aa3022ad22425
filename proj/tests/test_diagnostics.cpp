#include <cmath>
#include <numbers>

#include <doctest.h>

#include "pointflow/diagnostics.hpp"
#include "test_helpers.hpp"

using namespace pointflow;

namespace {

const Complex I{0.0, 1.0};

/// Independent slope oracle: central differences of I(t) on the samples,
/// touching neither the velocity field nor the claimed constant.
double fd_inertia_slope(const Trajectory& traj, const WeightVector& w) {
  double worst_dev = 0.0;
  double first = 0.0;
  bool have_first = false;
  for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
    const double di = moment_of_inertia(traj.samples[i + 1], w) -
                      moment_of_inertia(traj.samples[i - 1], w);
    const double dt = traj.samples[i + 1].time - traj.samples[i - 1].time;
    const double slope = di / dt;
    if (!have_first) {
      first = slope;
      have_first = true;
    }
    worst_dev = std::max(worst_dev, std::abs(slope - first));
  }
  CHECK(worst_dev <= 1e-6 * (1.0 + std::abs(first)));  // the slope is a constant
  return first;
}

}  // namespace

TEST_CASE("drift report for the contracting source pair") {
  const auto state = make_state({0.0, 1.0}, {1.0, 1.0});
  const auto traj = integrate_adaptive(state, 0.2, IntegratorOptions{});
  const WeightVector w{1.0, 1.0};
  const auto rep = invariant_drift_report(traj, w);

  CHECK(rep.scope == "source");
  CHECK(rep.idot_applicable);
  CHECK(rep.virial_weights == 1.0);
  CHECK(rep.idot_predicted == -2.0);
  CHECK(std::abs(rep.idot_slope - (-2.0)) <= 1e-6 * 2.0);
  CHECK(rep.idot_residual <= 1e-8);
  CHECK(rep.z_drift <= 1e-9 * 2.0);
  CHECK(rep.max_abs_a <= 1e-12);
  CHECK(rep.conjecture_holds);
  CHECK(rep.winding.size() == 1);
  CHECK(std::abs(rep.winding[0].delta_theta) <= 1e-10);
  CHECK(rep.g_drift <= 1e-8);
  // the slope against the sample-only oracle
  CHECK(std::abs(fd_inertia_slope(traj, w) - rep.idot_slope) <= 1e-6);
}

TEST_CASE("opposite strengths expand the moment of inertia") {
  const auto state = make_state({0.0, 1.0}, {1.0, -1.0});
  const auto traj = integrate_adaptive(state, 0.5, IntegratorOptions{});
  const WeightVector w{1.0, -1.0};
  const auto rep = invariant_drift_report(traj, w);
  CHECK(rep.virial_weights == -1.0);
  CHECK(std::abs(rep.idot_slope - 2.0) <= 1e-6 * 2.0);
  // strictly monotone I
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(moment_of_inertia(traj.samples[i], w) >
          moment_of_inertia(traj.samples[i - 1], w));
  }
}

TEST_CASE("zero-virial weights freeze the moment of inertia") {
  const WeightVector w{1.0, 1.0, -0.5};
  CHECK(virial(w) == 0.0);
  const auto state = make_state({0.0, 1.0, 0.4 + 0.9 * I}, {1.0, 1.0, -0.5});
  const auto traj = integrate_adaptive(state, 0.1, IntegratorOptions{});
  REQUIRE(traj.events.empty());
  const auto rep = invariant_drift_report(traj, w);
  const double i0 = moment_of_inertia(traj.front(), w);
  for (const auto& s : traj.samples) {
    CHECK(std::abs(moment_of_inertia(s, w) - i0) <= 1e-8);
  }
  CHECK(std::abs(rep.idot_slope) <= 1e-6);
}

TEST_CASE("idot prediction is marked not applicable off the pure-source case") {
  const auto mixed = make_state({0.0, 1.0}, {1.0 + I, 1.0 + I});
  const auto traj = integrate_adaptive(mixed, 0.05, IntegratorOptions{});
  const auto rep = invariant_drift_report(traj, {1.0, 1.0});
  CHECK(rep.scope == "non-source");
  CHECK(!rep.idot_applicable);
  // pure-source trajectory with foreign weights: fit still reported, claim not made
  const auto pure = make_state({0.0, 1.0}, {1.0, 1.0});
  const auto traj2 = integrate_adaptive(pure, 0.05, IntegratorOptions{});
  const auto rep2 = invariant_drift_report(traj2, {2.0, 1.0});
  CHECK(rep2.scope == "source");
  CHECK(!rep2.idot_applicable);
}

TEST_CASE("winding probe") {
  SUBCASE("pure-source pair does not wind at all") {
    const auto traj = integrate_adaptive(make_state({0.0, 1.0}, {1.0, 1.0}), 0.2,
                                         IntegratorOptions{});
    const auto res = winding_probe(traj);
    REQUIRE(res.pairs.size() == 1);
    CHECK(std::abs(res.pairs[0].delta_theta) <= 1e-10);
    CHECK(res.g_drift <= 1e-8);
  }
  SUBCASE("vortex pair winds past 2 pi") {
    // relative angle advances at rate 2: a full turn takes t = pi
    const auto traj = integrate_adaptive(make_state({0.0, 1.0}, {-I, -I}),
                                         1.1 * std::numbers::pi, IntegratorOptions{});
    const auto res = winding_probe(traj);
    CHECK(std::abs(res.pairs[0].delta_theta) > 2.0 * std::numbers::pi);
    const auto rep = invariant_drift_report(traj, {1.0, 1.0});
    CHECK(!rep.conjecture_holds);
    CHECK(rep.scope == "non-source");
  }
  SUBCASE("mixed pair winds without bound toward the collision") {
    const auto state = make_state({1.0, -1.0}, {1.0 + I, 1.0 + I});
    const auto t_star = 1.0;
    const auto near_traj =
        integrate_adaptive(state, 0.9 * t_star, IntegratorOptions{});
    const auto mid_traj = integrate_adaptive(state, 0.5 * t_star, IntegratorOptions{});
    const double near_wind = std::abs(winding_probe(near_traj).pairs[0].delta_theta);
    const double mid_wind = std::abs(winding_probe(mid_traj).pairs[0].delta_theta);
    CHECK(near_wind > mid_wind + 0.5);
  }
  SUBCASE("g is locally constant for pure sources") {
    std::mt19937 rng(101);
    const auto state = testing::random_pure_source_state(rng, 3);
    const auto traj = integrate_adaptive(state, 0.02, IntegratorOptions{});
    const auto res = winding_probe(traj);
    for (const auto& pw : res.pairs) {
      CHECK(std::abs(pw.delta_theta) < std::numbers::pi);
    }
    CHECK(res.g_drift <= 1e-8);
  }
  SUBCASE("coarse sampling is refused") {
    Trajectory coarse;
    coarse.samples.push_back(make_state({0.0, 1.0}, {-I, -I}, 0.0));
    coarse.samples.push_back(make_state({0.0, std::polar(1.0, 2.0)}, {-I, -I}, 1.0));
    CHECK_THROWS_AS(winding_probe(coarse), ResolutionError);
  }
}

TEST_CASE("report input validation") {
  const auto state = make_state({0.0, 1.0}, {1.0, 1.0});
  Trajectory single;
  single.samples.push_back(state);
  CHECK_THROWS_AS(invariant_drift_report(single, {1.0, 1.0}), std::invalid_argument);

  auto traj = integrate_adaptive(state, 0.1, IntegratorOptions{});
  CHECK_THROWS_AS(invariant_drift_report(traj, {1.0}), std::invalid_argument);

  Event fake;
  fake.kind = EventKind::merge;
  fake.time = 0.05;
  traj.events.push_back(fake);
  CHECK_THROWS_AS(invariant_drift_report(traj, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("gradient check") {
  SUBCASE("worked pair") {
    CHECK(gradient_check(make_state({0.0, 1.0}, {1.0, 1.0}), {1.0, 1.0}) <= 1e-8);
  }
  SUBCASE("random five-body pure-source states") {
    std::mt19937 rng(111);
    for (int trial = 0; trial < 20; ++trial) {
      const auto state = testing::random_pure_source_state(rng, 5);
      CHECK(gradient_check(state, source_weights(state)) <= 1e-6);
    }
  }
  SUBCASE("source part of a mixed field is a gradient of the log-pair sum") {
    std::mt19937 rng(121);
    for (int trial = 0; trial < 20; ++trial) {
      const auto mixed = testing::random_mixed_state(rng, 4);
      // strip the rotational content; what remains must pass the same check
      std::vector<Complex> gammas;
      for (const auto& p : mixed.particles) {
        gammas.push_back(Complex{p.intensity.value().real(), 0.0});
      }
      const auto source_only = make_state(mixed.positions(), gammas);
      CHECK(gradient_check(source_only, source_weights(mixed)) <= 1e-6);
    }
  }
}
