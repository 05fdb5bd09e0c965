#include <cmath>

#include <doctest.h>

#include "ksgeo/errors.hpp"
#include "ksgeo/integrator.hpp"

using namespace ksgeo;

namespace {

// E and L recomputed from a sample through the momentum expressions
double sample_energy(const GeodesicState& s, const SpacetimeParams& p) {
  return (1.0 - 2.0 * p.mass / s.r) * s.tdot +
         (2.0 * p.spin * p.mass / s.r) * s.phidot;
}

double sample_angmom(const GeodesicState& s, const SpacetimeParams& p) {
  return ((s.r * s.r + p.spin * p.spin) + 2.0 * p.spin * p.spin * p.mass / s.r) *
             s.phidot -
         (2.0 * p.spin * p.mass / s.r) * s.tdot;
}

}  // namespace

TEST_CASE("schwarzschild infall from rest at r = 2m takes proper time pi") {
  SpacetimeParams params(1.0);
  IntegrationConfig config;
  config.terminal_radius = 1e-6;
  config.max_tau = 10.0;
  const Trajectory traj = integrate_zero_constants(params, 2.0, config);

  CHECK(traj.termination == Termination::terminal_radius);
  CHECK(std::abs(traj.tau_span() - kPi) < 1e-6);
  CHECK(traj.samples.back().r == doctest::Approx(1e-6).epsilon(1e-6));
  CHECK(traj.max_normalization_drift <= 1e-9);
  CHECK(traj.constants.energy == 0.0);
  CHECK(traj.constants.angular_momentum == 0.0);
  CHECK(traj.constants.normalization == 1.0);

  // tau strictly increasing, t and phi flat on the zero-constants shell
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].tau > traj.samples[i - 1].tau);
    CHECK(traj.samples[i].t == 0.0);
    CHECK(traj.samples[i].phi == 0.0);
  }
}

TEST_CASE("max_tau = 0 gives a single-sample trajectory") {
  SpacetimeParams params(1.0);
  IntegrationConfig config;
  config.max_tau = 0.0;
  const Trajectory traj = integrate_zero_constants(params, 2.0, config);
  REQUIRE(traj.samples.size() == 1);
  CHECK(traj.samples[0].r == 2.0);
  CHECK(traj.samples[0].rdot == 0.0);
  CHECK(traj.termination == Termination::max_tau);
}

TEST_CASE("kerr zero-constants orbit oscillates between the roots of Delta") {
  SpacetimeParams params(1.0, 0.6);
  IntegrationConfig config;
  config.max_tau = 4.0 * kPi + 0.3;  // two full radial periods
  const Trajectory traj = integrate_zero_constants(params, 1.8, config);

  REQUIRE(traj.turning_radii.size() == 4);
  const auto roots = turning_points(ConstantsOfMotion{0, 0, 1}, params);
  REQUIRE(roots.size() == 2);
  // events alternate inner, outer, inner, outer
  CHECK(std::abs(traj.turning_radii[0] - roots[0]) < 1e-8);
  CHECK(std::abs(traj.turning_radii[1] - roots[1]) < 1e-8);
  CHECK(std::abs(traj.turning_radii[2] - roots[0]) < 1e-8);
  CHECK(std::abs(traj.turning_radii[3] - roots[1]) < 1e-8);
  CHECK(traj.max_normalization_drift <= 1e-9);

  // half period of the radial oscillation is pi * m
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].r <= 1.8 + 1e-9);
    CHECK(traj.samples[i].r >= 0.2 - 1e-9);
  }
}

TEST_CASE("stop_after_turns terminates at the localized event") {
  SpacetimeParams params(1.0, 0.6);
  IntegrationConfig config;
  config.max_tau = 100.0;
  config.stop_after_turns = 1;
  const Trajectory traj = integrate_zero_constants(params, 1.8, config);
  CHECK(traj.termination == Termination::turning_point);
  REQUIRE(traj.turning_radii.size() == 1);
  CHECK(std::abs(traj.turning_radii[0] - 0.2) < 1e-8);
  CHECK(std::abs(traj.tau_span() - kPi) < 1e-7);  // half period
  CHECK(std::abs(traj.samples.back().rdot) < 1e-9);
}

TEST_CASE("general integrator with zero constants matches the special path") {
  SpacetimeParams params(1.0, 0.6);
  IntegrationConfig config;
  config.max_tau = 3.0;
  const Trajectory a = integrate_zero_constants(params, 1.3, config);
  const Trajectory b =
      integrate_general(params, ConstantsOfMotion{0, 0, 1}, 1.3, -1, config);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(std::abs(a.samples[i].r - b.samples[i].r) <= 1e-9);
    CHECK(std::abs(a.samples[i].rdot - b.samples[i].rdot) <= 1e-9);
    CHECK(std::abs(a.samples[i].tau - b.samples[i].tau) <= 1e-9);
  }
}

TEST_CASE("innermost stable circular orbit stays circular") {
  SpacetimeParams params(1.0);
  const ConstantsOfMotion isco{std::sqrt(8.0 / 9.0), std::sqrt(12.0), 1.0};
  IntegrationConfig config;
  config.max_tau = 100.0;
  const Trajectory traj = integrate_general(params, isco, 6.0, -1, config);
  CHECK(traj.termination == Termination::max_tau);
  for (const auto& s : traj.samples) CHECK(std::abs(s.r - 6.0) < 1e-8);
  CHECK(traj.max_normalization_drift <= 1e-9);

  // phi advances uniformly at the circular-orbit rate L / r^2
  const double phidot = std::sqrt(12.0) / 36.0;
  CHECK(traj.samples.back().phi ==
        doctest::Approx(phidot * 100.0).epsilon(1e-8));
}

TEST_CASE("bound orbit oscillates between the outer pair of turning points") {
  SpacetimeParams params(1.0);
  const ConstantsOfMotion c{0.97, 3.9, 1.0};
  const auto roots = turning_points(c, params);
  REQUIRE(roots.size() == 3);

  // radial period of this orbit is about 376, so one full cycle fits
  IntegrationConfig config;
  config.max_tau = 450.0;
  const Trajectory traj =
      integrate_general(params, c, roots.back(), -1, config);

  double r_min = 1e300, r_max = 0.0;
  for (const auto& s : traj.samples) {
    r_min = std::min(r_min, s.r);
    r_max = std::max(r_max, s.r);
  }
  CHECK(std::abs(r_min - roots[1]) < 1e-7);
  CHECK(std::abs(r_max - roots[2]) < 1e-7);
  CHECK(traj.turning_radii.size() >= 2);
  CHECK(traj.max_normalization_drift <= 1e-9);

  // constants recomputed from every sample match the stored ones
  double drift = 0.0;
  for (const auto& s : traj.samples) {
    drift = std::max(drift, std::abs(sample_energy(s, params) - c.energy));
    drift = std::max(drift,
                     std::abs(sample_angmom(s, params) - c.angular_momentum));
  }
  CHECK(drift <= 1e-9);
}

TEST_CASE("plunge crosses the horizon with t marked undefined") {
  SpacetimeParams params(1.0);
  const ConstantsOfMotion c{0.95, 3.9, 1.0};
  const auto roots = turning_points(c, params);
  REQUIRE(roots.size() == 1);

  IntegrationConfig config;
  config.max_tau = 100.0;
  config.terminal_radius = 0.05;
  const Trajectory traj =
      integrate_general(params, c, roots[0], -1, config);
  CHECK(traj.termination == Termination::terminal_radius);

  const GeodesicState& last = traj.samples.back();
  CHECK(last.r == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(std::isnan(last.t));     // coordinate time is gone past the horizon
  CHECK(std::isnan(last.tdot));
  CHECK(std::isfinite(last.phi));  // the a = 0 azimuth stays regular
  CHECK(std::isfinite(last.phidot));

  // t was defined while outside
  CHECK(std::isfinite(traj.samples.front().t));
}

TEST_CASE("time symmetry: infall then reversed outfall returns to start") {
  SpacetimeParams params(1.0);
  IntegrationConfig config;
  config.max_tau = 1.0;
  const Trajectory in = integrate_zero_constants(params, 1.9, config);
  REQUIRE(in.termination == Termination::max_tau);
  const double r1 = in.samples.back().r;

  IntegrationConfig back;
  back.max_tau = 1.0;
  back.direction = Direction::outfall;
  const Trajectory out = integrate_zero_constants(params, r1, back);
  CHECK(std::abs(out.samples.back().r - 1.9) < 1e-7);
}

TEST_CASE("geometric-unit scaling: tau scales linearly with m") {
  IntegrationConfig config;
  config.terminal_radius = 1e-6;
  config.max_tau = 50.0;
  const Trajectory unit =
      integrate_zero_constants(SpacetimeParams(1.0), 2.0, config);

  IntegrationConfig scaled = config;
  scaled.terminal_radius = 3e-6;
  scaled.max_tau = 150.0;
  const Trajectory tripled =
      integrate_zero_constants(SpacetimeParams(3.0), 6.0, scaled);

  CHECK(std::abs(tripled.tau_span() / 3.0 - unit.tau_span()) < 1e-8);
}

TEST_CASE("quadrature and ODE agree on the infall proper time") {
  SpacetimeParams params(1.0);
  IntegrationConfig config;
  config.terminal_radius = 1e-6;
  config.max_tau = 10.0;
  const Trajectory traj = integrate_zero_constants(params, 2.0, config);
  CHECK(std::abs(proper_time_to_center(params, 2.0) - traj.tau_span()) < 1e-7);

  // from a start below the rest radius the spans still agree
  IntegrationConfig cfg2 = config;
  const Trajectory t2 = integrate_zero_constants(params, 1.0, cfg2);
  CHECK(std::abs(proper_time_to_center(params, 1.0) - t2.tau_span()) < 1e-7);
}

TEST_CASE("proper time to center closed forms") {
  CHECK(std::abs(proper_time_to_center(SpacetimeParams(1.0), 2.0) - kPi) <
        1e-10);
  CHECK(std::abs(proper_time_to_center(SpacetimeParams(1.0), 1.0) -
                 (kPi / 2.0 - 1.0)) < 1e-10);
  CHECK(std::abs(proper_time_to_center(SpacetimeParams(2.0), 4.0) -
                 2.0 * kPi) < 1e-10);

  CHECK_THROWS_AS(proper_time_to_center(SpacetimeParams(1.0), 2.5),
                  PreconditionError);
  CHECK_THROWS_AS(proper_time_to_center(SpacetimeParams(1.0), 0.0),
                  PreconditionError);
  CHECK_THROWS_AS(proper_time_to_center(SpacetimeParams(1.0, 0.5), 1.0),
                  PreconditionError);
}

TEST_CASE("admissible-region preconditions") {
  IntegrationConfig config;
  config.max_tau = 1.0;
  CHECK_THROWS_AS(integrate_zero_constants(SpacetimeParams(1.0), 3.0, config),
                  PreconditionError);
  CHECK_THROWS_AS(
      integrate_zero_constants(SpacetimeParams(1.0, 0.6), 2.5, config),
      PreconditionError);
  CHECK_THROWS_AS(
      integrate_zero_constants(SpacetimeParams(1.0, 0.6), 0.1, config),
      PreconditionError);

  // forbidden region for a bound-orbit potential
  const ConstantsOfMotion c{0.95, 3.9, 1.0};
  CHECK_THROWS_AS(
      integrate_general(SpacetimeParams(1.0), c, 5.0, -1, config),
      PreconditionError);
  CHECK_THROWS_AS(
      integrate_general(SpacetimeParams(1.0), c, 5.0, 2, config),
      PreconditionError);
}

TEST_CASE("extremal kerr zero-constants orbit is static at r = m") {
  // the admissible region degenerates to the double root of Delta
  SpacetimeParams params(1.0, 1.0);
  IntegrationConfig config;
  config.max_tau = 5.0;
  const Trajectory traj = integrate_zero_constants(params, 1.0, config);
  CHECK(traj.termination == Termination::max_tau);
  for (const auto& s : traj.samples) {
    CHECK(s.r == 1.0);
    CHECK(s.rdot == 0.0);
  }
}

TEST_CASE("unreachable tolerances fail with a step error") {
  IntegrationConfig config;
  config.max_tau = 3.0;
  config.rel_tol = 1e-300;
  config.abs_tol = 1e-300;
  CHECK_THROWS_AS(integrate_zero_constants(SpacetimeParams(1.0), 1.5, config),
                  StepFailureError);
}

TEST_CASE("residual column is small along trajectories") {
  SpacetimeParams params(1.0, 0.6);
  IntegrationConfig config;
  config.max_tau = 2.0 * kPi;
  const Trajectory traj = integrate_zero_constants(params, 1.8, config);
  REQUIRE(traj.residuals.size() == traj.samples.size());
  CHECK(traj.max_residual < 1e-11);
}
