#include "ksgeo/ks.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ksgeo/errors.hpp"

namespace ksgeo {

namespace {

Vec4 apply(const Mat4& a, const Vec4& v) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i)
    out[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2] + a[i][3] * v[3];
  return out;
}

Vec4 apply_transposed(const Mat4& a, const Vec4& v) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i)
    out[i] = a[0][i] * v[0] + a[1][i] * v[1] + a[2][i] * v[2] + a[3][i] * v[3];
  return out;
}

}  // namespace

Mat4 ks_matrix(const Vec4& s) {
  return Mat4{{{s[2], -s[3], s[0], -s[1]},
               {s[3], s[2], s[1], s[0]},
               {s[0], s[1], -s[2], -s[3]},
               {s[1], -s[0], -s[3], s[2]}}};
}

Vec3 ks_forward_position(const Vec4& s) {
  const Vec4 x4 = apply(ks_matrix(s), s);
  // fourth row annihilates s identically; cancellation is exact in pairs
  if (std::abs(x4[3]) > 1e-12 * norm_sq4(s))
    throw std::logic_error("KS fourth-row annihilation violated");
  return Vec3{x4[0], x4[1], x4[2]};
}

double ks_bilinear_invariant(const Vec4& s, const Vec4& sdot) {
  return s[1] * sdot[0] - s[0] * sdot[1] - s[3] * sdot[2] + s[2] * sdot[3];
}

Vec3 ks_forward_velocity(const Vec4& s, const Vec4& sdot) {
  const double s2 = norm_sq4(s);
  if (s2 <= 0.0) throw std::domain_error("ks_forward_velocity requires s^2 > 0");
  const Vec4 w = apply(ks_matrix(s), sdot);
  if (std::abs(w[3] - ks_bilinear_invariant(s, sdot)) >
      1e-12 * (1.0 + std::abs(w[3])))
    throw std::logic_error("KS bilinear-invariant check violated");
  const double scale = 1.0 / (2.0 * s2);
  return Vec3{scale * w[0], scale * w[1], scale * w[2]};
}

Vec4 ks_inverse_position(const Vec3& x, double phase) {
  const double r = norm3(x);
  if (r <= 0.0) throw std::domain_error("ks_inverse_position requires |x| > 0");
  const double c = std::cos(phase), sn = std::sin(phase);
  Vec4 s{};
  if (x[2] >= 0.0) {
    // s1^2 + s2^2 = (r + x3)/2 is bounded away from zero on this branch
    const double rho = std::sqrt(0.5 * (r + x[2]));
    s[0] = rho * c;
    s[1] = rho * sn;
    const double inv = 1.0 / (2.0 * rho * rho);
    s[2] = (s[0] * x[0] + s[1] * x[1]) * inv;
    s[3] = (s[0] * x[1] - s[1] * x[0]) * inv;
  } else {
    const double sigma = std::sqrt(0.5 * (r - x[2]));
    s[2] = sigma * c;
    s[3] = sigma * sn;
    const double inv = 1.0 / (2.0 * sigma * sigma);
    s[0] = (s[2] * x[0] + s[3] * x[1]) * inv;
    s[1] = (s[2] * x[1] - s[3] * x[0]) * inv;
  }
  return s;
}

Vec4 ks_inverse_velocity(const Vec4& s, const Vec3& xdot) {
  const double s2 = norm_sq4(s);
  if (s2 <= 0.0) throw std::domain_error("ks_inverse_velocity requires s^2 > 0");
  const Vec4 xdot4{xdot[0], xdot[1], xdot[2], 0.0};
  Vec4 sdot = apply_transposed(ks_matrix(s), xdot4);
  for (double& v : sdot) v *= 2.0;
  return sdot;
}

KSState kepler_to_oscillator(const Vec3State& state, double mass,
                             double phase) {
  const double r = norm3(state.position);
  if (r <= 0.0) throw std::domain_error("kepler_to_oscillator requires r > 0");
  const double v2 = dot3(state.velocity, state.velocity);
  const double shell_residual = 0.5 * v2 - mass / r + 0.5;
  if (std::abs(shell_residual) > 1e-10) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "input state is off the Kepler shell (residual %.17g)",
                  shell_residual);
    throw ShellViolationError(msg, shell_residual);
  }
  KSState ks;
  ks.s = ks_inverse_position(state.position, phase);
  ks.sdot = ks_inverse_velocity(ks.s, state.velocity);
  return ks;
}

Vec3State spherical_embedding(double r, double theta_in, double phi_in,
                              double rdot) {
  if (!(r > 0.0)) throw std::domain_error("spherical_embedding requires r > 0");
  const double st = std::sin(theta_in), ct = std::cos(theta_in);
  const double cp = std::cos(phi_in), sp = std::sin(phi_in);
  Vec3State out;
  out.position = Vec3{r * st * cp, r * st * sp, r * ct};
  out.velocity = Vec3{rdot * st * cp, rdot * st * sp, rdot * ct};
  return out;
}

}  // namespace ksgeo
