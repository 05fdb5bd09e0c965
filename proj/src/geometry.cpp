#include "ksgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ksgeo/errors.hpp"

namespace ksgeo {

namespace {

constexpr double kHorizonBand = 1e-10;   // refusal band around r = 2m, units of m
constexpr double kEquatorTol = 1e-9;

void require_positive_radius(double r) {
  if (!(r > 0.0)) throw std::domain_error("radius must be positive");
}

void require_off_horizon_schwarzschild(double r, double m) {
  if (std::abs(r - 2.0 * m) < kHorizonBand * m)
    throw std::domain_error("coordinate singularity at r = 2m");
}

void require_equatorial(const GeodesicState& state) {
  if (std::abs(state.theta - kPi / 2.0) > kEquatorTol || state.thetadot != 0.0)
    throw PreconditionError("state must lie in the invariant plane theta = pi/2");
}

}  // namespace

SpacetimeParams::SpacetimeParams(double mass_, double spin_)
    : mass(mass_), spin(spin_) {
  if (!(mass > 0.0)) throw PreconditionError("mass must be positive");
  if (!(std::abs(spin) <= mass)) throw PreconditionError("spin exceeds mass");
}

double schwarzschild_lagrangian(const GeodesicState& state,
                                const SpacetimeParams& params) {
  if (!params.schwarzschild())
    throw PreconditionError("schwarzschild_lagrangian requires spin = 0");
  require_positive_radius(state.r);
  require_off_horizon_schwarzschild(state.r, params.mass);
  const double f = 1.0 - 2.0 * params.mass / state.r;
  const double sin_theta = std::sin(state.theta);
  return 0.5 * (f * state.tdot * state.tdot - state.rdot * state.rdot / f -
                state.r * state.r * state.thetadot * state.thetadot -
                state.r * state.r * sin_theta * sin_theta * state.phidot * state.phidot);
}

CanonicalMomenta canonical_momenta(const GeodesicState& state,
                                   const SpacetimeParams& params) {
  if (!params.schwarzschild())
    throw PreconditionError("canonical_momenta requires spin = 0");
  require_positive_radius(state.r);
  require_off_horizon_schwarzschild(state.r, params.mass);
  const double f = 1.0 - 2.0 * params.mass / state.r;
  const double sin_theta = std::sin(state.theta);
  CanonicalMomenta p;
  p.p_t = f * state.tdot;
  p.p_r = state.rdot / f;
  p.p_theta = state.r * state.r * state.thetadot;
  p.p_phi = state.r * state.r * sin_theta * sin_theta * state.phidot;
  return p;
}

ConstantsOfMotion constants_from_state(const GeodesicState& state,
                                       const SpacetimeParams& params) {
  require_equatorial(state);
  require_positive_radius(state.r);
  ConstantsOfMotion c;
  if (params.schwarzschild()) {
    require_off_horizon_schwarzschild(state.r, params.mass);
    const double f = 1.0 - 2.0 * params.mass / state.r;
    c.energy = f * state.tdot;
    c.angular_momentum = state.r * state.r * state.phidot;
    c.normalization = 2.0 * schwarzschild_lagrangian(state, params);
  } else {
    const double m = params.mass, a = params.spin, r = state.r;
    c.energy = (1.0 - 2.0 * m / r) * state.tdot + (2.0 * a * m / r) * state.phidot;
    c.angular_momentum =
        ((r * r + a * a) + 2.0 * a * a * m / r) * state.phidot -
        (2.0 * a * m / r) * state.tdot;
    c.normalization = 2.0 * kerr_lagrangian_equatorial(state, params);
  }
  return c;
}

double radial_residual_schwarzschild(double r, double rdot,
                                     const ConstantsOfMotion& consts,
                                     const SpacetimeParams& params) {
  require_positive_radius(r);
  require_off_horizon_schwarzschild(r, params.mass);
  const double f = 1.0 - 2.0 * params.mass / r;
  const double e = consts.energy, l = consts.angular_momentum;
  return 0.5 * (e * e / f - rdot * rdot / f - l * l / (r * r)) - 0.5;
}

double zero_constants_residual(double r, double rdot,
                               const SpacetimeParams& params) {
  require_positive_radius(r);
  const double a = params.spin;
  return 0.5 * rdot * rdot + a * a / (2.0 * r * r) - params.mass / r + 0.5;
}

double kerr_delta(double r, const SpacetimeParams& params) {
  return r * r - 2.0 * params.mass * r + params.spin * params.spin;
}

double kerr_lagrangian_equatorial(const GeodesicState& state,
                                  const SpacetimeParams& params) {
  require_equatorial(state);
  require_positive_radius(state.r);
  const double m = params.mass, a = params.spin, r = state.r;
  const double delta = kerr_delta(r, params);
  if (std::abs(delta) < kHorizonBand * m * m)
    throw std::domain_error("coordinate singularity at Delta = 0");
  const double two_l =
      (1.0 - 2.0 * m / r) * state.tdot * state.tdot +
      (4.0 * a * m / r) * state.tdot * state.phidot -
      (r * r / delta) * state.rdot * state.rdot -
      ((r * r + a * a) + 2.0 * a * a * m / r) * state.phidot * state.phidot;
  return 0.5 * two_l;
}

double radial_residual_kerr(double r, double rdot,
                            const ConstantsOfMotion& consts,
                            const SpacetimeParams& params) {
  require_positive_radius(r);
  const double m = params.mass, a = params.spin;
  const double e = consts.energy, l = consts.angular_momentum;
  const double lae = l - a * e;
  return 0.5 * rdot * rdot - m / r +
         0.5 * (1.0 - e * e) * (1.0 + a * a / (r * r)) +
         l * l / (2.0 * r * r) - (m / (r * r * r)) * lae * lae;
}

double radial_acceleration(double r, const ConstantsOfMotion& consts,
                           const SpacetimeParams& params) {
  require_positive_radius(r);
  const double m = params.mass, a = params.spin;
  const double e = consts.energy, l = consts.angular_momentum;
  const double lae = l - a * e;
  const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
  return -m / r2 + (1.0 - e * e) * a * a / r3 + l * l / r3 -
         3.0 * m * lae * lae / r4;
}

double radial_velocity_squared(double r, const ConstantsOfMotion& consts,
                               const SpacetimeParams& params) {
  return -2.0 * radial_residual_kerr(r, 0.0, consts, params);
}

double coordinate_time_velocity(double r, const ConstantsOfMotion& consts,
                                const SpacetimeParams& params) {
  require_positive_radius(r);
  const double m = params.mass, a = params.spin;
  if (params.schwarzschild())
    return consts.energy / (1.0 - 2.0 * m / r);
  const double delta = kerr_delta(r, params);
  return (((r * r + a * a) + 2.0 * a * a * m / r) * consts.energy -
          (2.0 * a * m / r) * consts.angular_momentum) / delta;
}

double azimuthal_velocity(double r, const ConstantsOfMotion& consts,
                          const SpacetimeParams& params) {
  require_positive_radius(r);
  const double m = params.mass, a = params.spin;
  if (params.schwarzschild())
    return consts.angular_momentum / (r * r);
  const double delta = kerr_delta(r, params);
  return ((1.0 - 2.0 * m / r) * consts.angular_momentum +
          (2.0 * a * m / r) * consts.energy) / delta;
}

double normalization_from_radial(double r, double rdot,
                                 const ConstantsOfMotion& consts,
                                 const SpacetimeParams& params) {
  const double res = radial_residual_kerr(r, rdot, consts, params);
  const double delta = kerr_delta(r, params);
  return 1.0 - 2.0 * res * r * r / delta;
}

namespace {

// Bisection on a sign change; assumes f(lo) and f(hi) have opposite signs.
template <typename F>
double bisect(const F& f, double lo, double hi, double flo) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) != (fm < 0.0)) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo < 1e-15 * std::max(std::abs(lo), 1e-300)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> turning_points(const ConstantsOfMotion& consts,
                                   const SpacetimeParams& params) {
  const double m = params.mass;
  const auto residual = [&](double r) {
    return radial_residual_kerr(r, 0.0, consts, params);
  };
  const auto dresidual = [&](double r) {
    return -radial_acceleration(r, consts, params);
  };

  const int n_grid = 4000;
  const double lo = 1e-6 * m, hi = 1e3 * m;
  const double dlog = std::log(hi / lo) / n_grid;

  const double e = consts.energy, l = consts.angular_momentum;
  const double tangent_tol =
      1e-11 * std::max({1.0, e * e, (l / m) * (l / m)});

  std::vector<double> roots;
  double r_prev = lo, f_prev = residual(lo), df_prev = dresidual(lo);
  if (f_prev == 0.0) roots.push_back(r_prev);
  for (int i = 1; i <= n_grid; ++i) {
    const double r = lo * std::exp(i * dlog);
    const double f = residual(r);
    const double df = dresidual(r);
    if (f == 0.0) {
      roots.push_back(r);
    } else if ((f_prev < 0.0) != (f < 0.0) && f_prev != 0.0) {
      roots.push_back(bisect(residual, r_prev, r, f_prev));
    } else if ((df_prev < 0.0) != (df < 0.0)) {
      // critical point inside the cell: accept as a tangent root if the
      // residual vanishes there (double root, no sign change)
      const double rc = bisect(dresidual, r_prev, r, df_prev);
      if (std::abs(residual(rc)) <= tangent_tol) roots.push_back(rc);
    }
    r_prev = r;
    f_prev = f;
    df_prev = df;
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > 1e-9 * std::max(m, r))
      unique.push_back(r);
  }
  return unique;
}

}  // namespace ksgeo
