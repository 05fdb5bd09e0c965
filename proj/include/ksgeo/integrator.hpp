// ksgeo - proper-time propagation of radial geodesics with adaptive stepping,
// turning-point event detection and continuous invariant monitoring.
//
// The radial motion is propagated in its second-order form
// rddot = -m/r^2 + (1-E^2) a^2/r^3 + L^2/r^3 - 3m(L-aE)^2/r^4 so that rdot
// changes sign smoothly at turning points; t(tau) and phi(tau) ride along as
// quadratures of the algebraic velocity relations.
#pragma once

#include <limits>
#include <vector>

#include "ksgeo/geometry.hpp"

namespace ksgeo {

enum class Direction { infall, outfall };
enum class Termination { turning_point, terminal_radius, max_tau };

struct IntegrationConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step = std::numeric_limits<double>::infinity();
  // stop radius for inward motion; negative selects the default 1e-6 * mass
  double terminal_radius = -1.0;
  Direction direction = Direction::infall;
  double max_tau = std::numeric_limits<double>::infinity();
  // when > 0, stop after this many localized rdot = 0 events
  int stop_after_turns = 0;
};

struct Trajectory {
  SpacetimeParams params;
  ConstantsOfMotion constants;
  IntegrationConfig config;
  std::vector<GeodesicState> samples;     // tau strictly increasing
  std::vector<double> residuals;          // on-shell residual per sample
  std::vector<double> turning_radii;      // radii of localized rdot = 0 events
  // max |2L - 1| over samples outside the coordinate-singular band
  // |Delta| < 1e-2 r^2 (the zero-constants turning points sit exactly on
  // Delta = 0, where 2L is 0/0)
  double max_normalization_drift = 0.0;
  double max_residual = 0.0;              // max |residual| over all samples
  Termination termination = Termination::max_tau;

  double tau_span() const {
    return samples.empty() ? 0.0 : samples.back().tau - samples.front().tau;
  }
};

// Infall/outfall on the zero-constants shell rdot^2 = 2m/r - a^2/r^2 - 1.
// Admissible start: 0 < r0 <= 2m for a = 0, r0 between the roots of Delta
// otherwise. The trajectory records constants (0, 0, 1); t and phi stay
// constant (tdot = phidot = 0 on this shell).
Trajectory integrate_zero_constants(const SpacetimeParams& params, double r0,
                                    const IntegrationConfig& config);

// General equatorial geodesic with conserved (E, L). rdot_sign (+1/-1) picks
// the initial radial direction; |rdot| is solved from the on-shell condition.
// t(tau) is integrated only while the run stays clear of the horizon and is
// marked undefined (NaN) afterwards; for a != 0, phi shares the 1/Delta
// pathology and freezes with it.
Trajectory integrate_general(const SpacetimeParams& params,
                             const ConstantsOfMotion& consts, double r0,
                             int rdot_sign, const IntegrationConfig& config);

// Proper time for infall from rest on the zero-constants shell at r0 to the
// center, by adaptive quadrature of dtau = -dr/sqrt(2m/r - 1). Schwarzschild
// only; requires 0 < r0 <= 2m.
double proper_time_to_center(const SpacetimeParams& params, double r0);

}  // namespace ksgeo
