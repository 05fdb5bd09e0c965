// ksgeo - closed-form metric quantities, Lagrangians, constants of motion and
// radial-equation residuals for Schwarzschild and equatorial Kerr spacetimes.
//
// Geometric units c = hbar = G = 1 throughout. Dots denote derivatives with
// respect to proper time tau. All on-shell equations are exposed as signed
// residuals (LHS - RHS), zero exactly on the time-like geodesic shell.
#pragma once

#include <vector>

namespace ksgeo {

inline constexpr double kPi = 3.14159265358979323846;

// Mass m and spin per unit mass a. a = 0 selects Schwarzschild; |a| <= m
// (sub-extremal or extremal) is enforced at construction.
struct SpacetimeParams {
  double mass;
  double spin;

  explicit SpacetimeParams(double mass_, double spin_ = 0.0);
  bool schwarzschild() const { return spin == 0.0; }
};

// One sample of an equatorial time-like geodesic. States produced by this
// toolkit always have theta = pi/2 and thetadot = 0.
struct GeodesicState {
  double tau = 0.0;
  double t = 0.0;
  double r = 0.0;
  double theta = kPi / 2.0;
  double phi = 0.0;
  double tdot = 0.0;
  double rdot = 0.0;
  double thetadot = 0.0;
  double phidot = 0.0;
};

// Conserved energy E, angular momentum L about the invariant-plane axis, and
// the value of 2*Lagrangian (+1 for a time-like geodesic).
struct ConstantsOfMotion {
  double energy = 0.0;
  double angular_momentum = 0.0;
  double normalization = 1.0;
};

// Schwarzschild canonical momenta. Sign convention: p_t = +dL/dtdot, the
// spatial momenta carry a minus sign (p_r = -dL/drdot etc.), so all four come
// out with positive coefficients for the metric signature used here.
struct CanonicalMomenta {
  double p_t = 0.0;
  double p_r = 0.0;
  double p_theta = 0.0;
  double p_phi = 0.0;
};

// L = (1/2)[(1-2m/r) tdot^2 - rdot^2/(1-2m/r) - r^2 thetadot^2
//          - r^2 sin^2(theta) phidot^2].
// Throws std::domain_error at r <= 0 and inside the horizon refusal band
// |r - 2m| < 1e-10 m (coordinate singularity).
double schwarzschild_lagrangian(const GeodesicState& state,
                                const SpacetimeParams& params);

// p_t = (1-2m/r) tdot, p_r = rdot/(1-2m/r), p_theta = r^2 thetadot,
// p_phi = r^2 sin^2(theta) phidot. Schwarzschild only (params.spin == 0).
CanonicalMomenta canonical_momenta(const GeodesicState& state,
                                   const SpacetimeParams& params);

// Evaluates (E, L, 2*Lagrangian) at a state in the invariant plane.
// Works for both Schwarzschild and equatorial Kerr.
ConstantsOfMotion constants_from_state(const GeodesicState& state,
                                       const SpacetimeParams& params);

// Residual of the Schwarzschild radial equation in its E^2/(1-2m/r) form:
//   (1/2)[E^2/(1-2m/r) - rdot^2/(1-2m/r) - L^2/r^2] - 1/2.
// Singular at the horizon; refuses |r - 2m| < 1e-10 m.
double radial_residual_schwarzschild(double r, double rdot,
                                     const ConstantsOfMotion& consts,
                                     const SpacetimeParams& params);

// Residual of the zero-constants radial equation (Kerr form, exactly the
// Schwarzschild form when a = 0):
//   (1/2) rdot^2 + a^2/(2 r^2) - m/r + 1/2.
// Regular for all r > 0.
double zero_constants_residual(double r, double rdot,
                               const SpacetimeParams& params);

// Equatorial Kerr Lagrangian,
//   L = (1/2)[(1-2m/r) tdot^2 + (4am/r) tdot phidot - (r^2/Delta) rdot^2
//            - ((r^2+a^2) + 2a^2 m/r) phidot^2].
// Requires theta = pi/2, thetadot = 0; throws std::domain_error where
// Delta vanishes (horizon radii).
double kerr_lagrangian_equatorial(const GeodesicState& state,
                                  const SpacetimeParams& params);

// Delta = r^2 - 2 m r + a^2.
double kerr_delta(double r, const SpacetimeParams& params);

// Residual of the general equatorial radial equation (regular in r > 0):
//   (1/2) rdot^2 - m/r + (1/2)(1-E^2)(1+a^2/r^2) + L^2/(2r^2)
//   - (m/r^3)(L - aE)^2.
// With a = 0 this is the Schwarzschild residual rearranged onto the
// (1/2) rdot^2 form; with E = L = 0 it equals zero_constants_residual.
double radial_residual_kerr(double r, double rdot,
                            const ConstantsOfMotion& consts,
                            const SpacetimeParams& params);

// rddot along the shell: the tau-derivative of the radial equation,
//   rddot = -m/r^2 + (1-E^2) a^2/r^3 + L^2/r^3 - 3 m (L - aE)^2/r^4.
double radial_acceleration(double r, const ConstantsOfMotion& consts,
                           const SpacetimeParams& params);

// rdot^2 solved from the on-shell condition (may be negative in forbidden
// regions).
double radial_velocity_squared(double r, const ConstantsOfMotion& consts,
                               const SpacetimeParams& params);

// Coordinate-time and azimuthal velocities of a geodesic with the given
// constants. Schwarzschild: tdot = E/(1-2m/r), phidot = L/r^2. Kerr:
// the Boyer-Lindquist relations with a 1/Delta factor.
double coordinate_time_velocity(double r, const ConstantsOfMotion& consts,
                                const SpacetimeParams& params);
double azimuthal_velocity(double r, const ConstantsOfMotion& consts,
                          const SpacetimeParams& params);

// 2*Lagrangian evaluated from the radial data alone via the identity
// 2L - 1 = -2 * residual * r^2 / Delta. Ill-conditioned near Delta = 0.
double normalization_from_radial(double r, double rdot,
                                 const ConstantsOfMotion& consts,
                                 const SpacetimeParams& params);

// Sorted positive radii where rdot^2 = 0 on shell. Finds simple roots by
// bracketed bisection on a log-spaced grid over [1e-6 m, 1e3 m] and tangent
// (double) roots through sign changes of the radial derivative. Empty when
// no positive turning point exists.
std::vector<double> turning_points(const ConstantsOfMotion& consts,
                                   const SpacetimeParams& params);

}  // namespace ksgeo
