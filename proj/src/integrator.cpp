#include "ksgeo/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ksgeo/errors.hpp"

namespace ksgeo {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// |Delta|/r^2 below which t (and phi for a != 0) stop evolving; coordinate
// time diverges logarithmically at the horizon
constexpr double kFreezeBand = 1e-6;
// |Delta|/r^2 below which |2L - 1| is excluded from the drift monitor; the
// conversion from the regular residual carries a 2 r^2 / |Delta| factor,
// capped at 200x by this band
constexpr double kNormBand = 1e-2;

using Y = std::array<double, 4>;  // r, rdot, t, phi

// Dormand-Prince RK5(4)7M coefficients
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

struct DenseOutput {
  Y r1{}, r2{}, r3{}, r4{}, r5{};
  Y eval(double theta) const {
    const double th1 = 1.0 - theta;
    Y out{};
    for (int i = 0; i < 4; ++i)
      out[i] = r1[i] +
               theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
    return out;
  }
};

struct System {
  SpacetimeParams params;
  ConstantsOfMotion consts;
  bool zero_consts;
  bool frozen = false;

  Y deriv(const Y& y) const {
    const double r = y[0];
    if (!(r > 0.0)) return Y{kNan, kNan, kNan, kNan};
    Y f{};
    f[0] = y[1];
    f[1] = radial_acceleration(r, consts, params);
    if (zero_consts || frozen) {
      f[2] = 0.0;
      f[3] = params.schwarzschild() && !zero_consts
                 ? azimuthal_velocity(r, consts, params)
                 : 0.0;
    } else {
      f[2] = coordinate_time_velocity(r, consts, params);
      f[3] = azimuthal_velocity(r, consts, params);
    }
    return f;
  }
};

double error_norm(const Y& err, const Y& y0, const Y& y1, double abs_tol,
                  double rel_tol) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double sc =
        abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    sum += q * q;
  }
  const double norm = std::sqrt(sum / 4.0);
  return std::isfinite(norm) ? norm : 1e10;
}

class Propagator {
 public:
  Propagator(const SpacetimeParams& params, const ConstantsOfMotion& consts,
             const IntegrationConfig& config, bool zero_consts)
      : sys_{params, consts, zero_consts},
        config_(config),
        traj_{params, consts, config, {}, {}, {}, 0.0, 0.0,
              Termination::max_tau} {
    if (!(config_.rel_tol > 0.0) || !(config_.abs_tol > 0.0))
      throw PreconditionError("tolerances must be positive");
    if (!(config_.max_step > 0.0))
      throw PreconditionError("max_step must be positive");
    if (config_.terminal_radius < 0.0)
      config_.terminal_radius = 1e-6 * params.mass;
    if (config_.stop_after_turns < 0)
      throw PreconditionError("stop_after_turns must be >= 0");
    traj_.config = config_;
  }

  Trajectory run(double r0, double rdot0) {
    double tau = 0.0;
    Y y{r0, rdot0, 0.0, 0.0};
    update_freeze(y[0]);
    record(tau, y);
    if (config_.max_tau <= 0.0) {
      traj_.termination = Termination::max_tau;
      return std::move(traj_);
    }

    Y k1 = sys_.deriv(y);
    double h = initial_step(y, k1);
    double facold = 1e-4;
    long steps = 0;
    int consecutive_rejects = 0;

    while (true) {
      if (++steps > 5'000'000)
        throw StepFailureError("step limit exceeded; tolerances cannot be met");
      const double remaining = config_.max_tau - tau;
      bool landing = false;
      if (h >= remaining) {
        h = remaining;
        landing = true;
      }
      if (h > config_.max_step) {
        h = config_.max_step;
        landing = false;
      }
      if (!landing &&
          h < 1e-14 * std::max(std::abs(tau), 1e-3 * sys_.params.mass))
        throw StepFailureError("step size underflow; tolerances cannot be met");

      // stages (FSAL: k7 doubles as the next k1)
      Y k2, k3, k4, k5, k6, k7, yt, ynew, errv;
      for (int i = 0; i < 4; ++i) yt[i] = y[i] + h * a21 * k1[i];
      k2 = sys_.deriv(yt);
      for (int i = 0; i < 4; ++i)
        yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      k3 = sys_.deriv(yt);
      for (int i = 0; i < 4; ++i)
        yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = sys_.deriv(yt);
      for (int i = 0; i < 4; ++i)
        yt[i] = y[i] +
                h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = sys_.deriv(yt);
      for (int i = 0; i < 4; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
      k6 = sys_.deriv(yt);
      for (int i = 0; i < 4; ++i)
        ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                              a75 * k5[i] + a76 * k6[i]);
      k7 = sys_.deriv(ynew);
      for (int i = 0; i < 4; ++i)
        errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                       e6 * k6[i] + e7 * k7[i]);

      const double err =
          error_norm(errv, y, ynew, config_.abs_tol, config_.rel_tol);
      const double fac11 = std::pow(err, 0.17);
      if (err > 1.0) {
        h /= std::min(5.0, fac11 / 0.9);
        if (++consecutive_rejects > 200)
          throw StepFailureError("too many rejected steps");
        continue;
      }
      consecutive_rejects = 0;

      // dense output over the accepted step
      DenseOutput dense;
      for (int i = 0; i < 4; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        dense.r1[i] = y[i];
        dense.r2[i] = ydiff;
        dense.r3[i] = bspl;
        dense.r4[i] = ydiff - h * k7[i] - bspl;
        dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                           d6 * k6[i] + d7 * k7[i]);
      }

      // events inside the step, processed in tau order
      double theta_turn = 2.0, theta_term = 2.0;
      if (y[1] != 0.0 && ((y[1] < 0.0) != (ynew[1] < 0.0) || ynew[1] == 0.0))
        theta_turn = locate(dense, 1, 0.0, y[1]);
      if (y[0] > config_.terminal_radius && ynew[0] <= config_.terminal_radius)
        theta_term = locate(dense, 0, config_.terminal_radius,
                            y[0] - config_.terminal_radius);

      if (theta_turn < theta_term) {
        const Y ye = dense.eval(theta_turn);
        traj_.turning_radii.push_back(ye[0]);
        const bool stopping =
            config_.stop_after_turns > 0 &&
            static_cast<int>(traj_.turning_radii.size()) >=
                config_.stop_after_turns;
        if (stopping || theta_turn < 1.0 - 1e-12)
          record(tau + theta_turn * h, ye);
        if (stopping) {
          traj_.termination = Termination::turning_point;
          return std::move(traj_);
        }
      }
      if (theta_term <= 1.0) {
        record(tau + theta_term * h, dense.eval(theta_term));
        traj_.termination = Termination::terminal_radius;
        return std::move(traj_);
      }

      tau = landing ? config_.max_tau : tau + h;
      y = ynew;
      k1 = k7;
      update_freeze(y[0]);
      record(tau, y);
      if (landing) {
        traj_.termination = Termination::max_tau;
        return std::move(traj_);
      }

      double fac = fac11 / std::pow(facold, 0.04);
      fac = std::max(0.1, std::min(5.0, fac / 0.9));
      h /= fac;
      facold = std::max(err, 1e-4);
    }
  }

 private:
  // bisect component `comp` of the dense interpolant to `target`;
  // f_start is its deviation at theta = 0
  double locate(const DenseOutput& dense, int comp, double target,
                double f_start) const {
    double lo = 0.0, hi = 1.0;
    const bool neg_start = f_start < 0.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double f = dense.eval(mid)[comp] - target;
      if (f == 0.0) return mid;
      if ((f < 0.0) == neg_start)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  void update_freeze(double r) {
    if (sys_.zero_consts || sys_.frozen) return;
    if (std::abs(kerr_delta(r, sys_.params)) < kFreezeBand * r * r)
      sys_.frozen = true;
  }

  void record(double tau, const Y& y) {
    GeodesicState s;
    s.tau = tau;
    s.r = y[0];
    s.rdot = y[1];
    s.theta = kPi / 2.0;
    s.thetadot = 0.0;
    const bool t_defined = sys_.zero_consts || !sys_.frozen;
    const bool phi_defined =
        sys_.zero_consts || !sys_.frozen || sys_.params.schwarzschild();
    s.t = t_defined ? y[2] : kNan;
    s.tdot = t_defined ? (sys_.zero_consts
                              ? 0.0
                              : coordinate_time_velocity(y[0], sys_.consts,
                                                         sys_.params))
                       : kNan;
    s.phi = phi_defined ? y[3] : kNan;
    s.phidot = phi_defined
                   ? (sys_.zero_consts
                          ? 0.0
                          : azimuthal_velocity(y[0], sys_.consts, sys_.params))
                   : kNan;
    traj_.samples.push_back(s);

    const double res =
        radial_residual_kerr(y[0], y[1], sys_.consts, sys_.params);
    traj_.residuals.push_back(res);
    traj_.max_residual = std::max(traj_.max_residual, std::abs(res));
    const double delta = kerr_delta(y[0], sys_.params);
    if (std::abs(delta) >= kNormBand * y[0] * y[0]) {
      const double drift = std::abs(2.0 * res * y[0] * y[0] / delta);
      traj_.max_normalization_drift =
          std::max(traj_.max_normalization_drift, drift);
    }
  }

  double initial_step(const Y& y, const Y& f) const {
    double d0 = 0.0, d1n = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = config_.abs_tol + config_.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (f[i] / sc) * (f[i] / sc);
    }
    double h = 0.01 * std::sqrt(d0 / std::max(d1n, 1e-300));
    if (!std::isfinite(h) || h <= 0.0) h = 1e-6 * sys_.params.mass;
    h = std::min({h, config_.max_step, 1e-1 * sys_.params.mass});
    return std::min(h, std::max(config_.max_tau, 0.0));
  }

  System sys_;
  IntegrationConfig config_;
  Trajectory traj_;
};

}  // namespace

Trajectory integrate_zero_constants(const SpacetimeParams& params, double r0,
                                    const IntegrationConfig& config) {
  if (!(r0 > 0.0)) throw PreconditionError("r0 must be positive");
  const double m = params.mass, a = params.spin;
  double v2 = 2.0 * m / r0 - (a * a) / (r0 * r0) - 1.0;
  if (v2 < -1e-12) {
    char msg[160];
    if (params.schwarzschild())
      std::snprintf(msg, sizeof(msg),
                    "r0 = %.17g outside the zero-constants region (0, 2m]", r0);
    else
      std::snprintf(msg, sizeof(msg),
                    "r0 = %.17g outside the region between the roots of Delta",
                    r0);
    throw PreconditionError(msg);
  }
  v2 = std::max(v2, 0.0);
  const double rdot0 =
      (config.direction == Direction::infall ? -1.0 : 1.0) * std::sqrt(v2);
  Propagator prop(params, ConstantsOfMotion{0.0, 0.0, 1.0}, config, true);
  return prop.run(r0, rdot0);
}

Trajectory integrate_general(const SpacetimeParams& params,
                             const ConstantsOfMotion& consts, double r0,
                             int rdot_sign, const IntegrationConfig& config) {
  if (rdot_sign != 1 && rdot_sign != -1)
    throw PreconditionError("rdot_sign must be +1 or -1");
  if (!(r0 > 0.0)) throw PreconditionError("r0 must be positive");
  double v2 = radial_velocity_squared(r0, consts, params);
  if (v2 < -1e-10) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "r0 = %.17g is in a forbidden region: on-shell rdot^2 = %.3e "
                  "< 0",
                  r0, v2);
    throw PreconditionError(msg);
  }
  v2 = std::max(v2, 0.0);
  const double rdot0 = rdot_sign * std::sqrt(v2);
  const bool zero_consts =
      consts.energy == 0.0 && consts.angular_momentum == 0.0;
  Propagator prop(params, consts, config, zero_consts);
  return prop.run(r0, rdot0);
}

namespace {

// adaptive Simpson with interval doubling on failure to agree
double simpson_recurse(double (*f)(double, double, double), double m, double r0,
                       double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double lm = 0.5 * (a + 0.5 * (a + b));
  const double rm = 0.5 * (0.5 * (a + b) + b);
  const double flm = f(lm, m, r0), frm = f(rm, m, r0);
  const double c = 0.5 * (a + b);
  const double left = (c - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - c) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_recurse(f, m, r0, a, c, fa, flm, fm, left, 0.5 * tol,
                         depth - 1) +
         simpson_recurse(f, m, r0, c, b, fm, frm, fb, right, 0.5 * tol,
                         depth - 1);
}

// integrand of tau = int_0^{r0} dr/sqrt(2m/r - 1) after r = r0 sin^2 u;
// regular on [0, pi/2] including the r0 = 2m rest point
double infall_integrand(double u, double m, double r0) {
  const double su = std::sin(u), cu = std::cos(u);
  const double denom = std::sqrt((2.0 * m - r0) + r0 * cu * cu);
  return 2.0 * r0 * std::sqrt(r0) * su * su * cu / denom;
}

}  // namespace

double proper_time_to_center(const SpacetimeParams& params, double r0) {
  if (!params.schwarzschild())
    throw PreconditionError("proper_time_to_center requires spin = 0");
  const double m = params.mass;
  if (!(r0 > 0.0) || r0 > 2.0 * m * (1.0 + 1e-12))
    throw PreconditionError("r0 must lie in (0, 2m]");
  const double a = 0.0, b = kPi / 2.0;
  const double fa = infall_integrand(a, m, r0), fb = infall_integrand(b, m, r0);
  const double c = 0.5 * (a + b), fc = infall_integrand(c, m, r0);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
  return simpson_recurse(infall_integrand, m, r0, a, b, fa, fc, fb, whole,
                         1e-13, 48);
}

}  // namespace ksgeo
