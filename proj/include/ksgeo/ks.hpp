// ksgeo - Kustaanheimo-Stiefel matrix transformation: forward and inverse maps
// for coordinates and velocities, matrix identities, and the Kepler-to-
// oscillator energy-shell map.
//
// Conventions: X = A(s) S maps the 4-vector s to (x1, x2, x3, 0), with
// r = |x| = s^2 and Xdot = (1/(2 s^2)) A(s) Sdot. The coordinate and velocity
// maps are independent transformations; only pointwise identities relate them.
#pragma once

#include <array>
#include <cmath>

namespace ksgeo {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// Euclidean position/velocity pair on the Kepler side of the map.
struct Vec3State {
  Vec3 position{};
  Vec3 velocity{};
};

// Oscillator-side phase point: 4-vector s and its velocity sdot.
struct KSState {
  Vec4 s{};
  Vec4 sdot{};
};

inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double dot4(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }
inline double norm_sq4(const Vec4& a) { return dot4(a, a); }

// The KS matrix
//   A(s) = [ s3 -s4  s1 -s2
//            s4  s3  s2  s1
//            s1  s2 -s3 -s4
//            s2 -s1 -s4  s3 ],
// satisfying A~ A = A A~ = s^2 I.
Mat4 ks_matrix(const Vec4& s);

// First three components of A(s) s; the fourth vanishes identically and is
// asserted, not returned.
Vec3 ks_forward_position(const Vec4& s);

// First three components of (1/(2 s^2)) A(s) sdot. The fourth component of
// A(s) sdot is the bilinear invariant; it is checked against
// ks_bilinear_invariant and discarded. Requires s^2 > 0.
Vec3 ks_forward_velocity(const Vec4& s, const Vec4& sdot);

// s2 sdot1 - s1 sdot2 - s4 sdot3 + s3 sdot4, the fourth row of A(s) applied
// to sdot.
double ks_bilinear_invariant(const Vec4& s, const Vec4& sdot);

// A right inverse of the coordinate map: returns s with
// ks_forward_position(s) = x and s^2 = |x|. The map is many-to-one; phase
// parametrizes the one-dimensional preimage circle. Branch selected by the
// sign of x3. Requires |x| > 0.
Vec4 ks_inverse_position(const Vec3& x, double phase);

// The velocity lift sdot = 2 A~(s) (xdot, 0), exact inverse of
// ks_forward_velocity at fixed s. Requires s^2 > 0.
Vec4 ks_inverse_velocity(const Vec4& s, const Vec3& xdot);

// Maps a state on the Kepler shell (1/2) v^2 - m/r = -1/2 to an oscillator
// phase point whose energy (1/2) m_ho sdot^2 + (1/2) m_ho w^2 s^2 equals m,
// with m_ho = 1/4 and w = 2. Throws ShellViolationError (carrying the shell
// residual) if the input is off shell by more than 1e-10.
KSState kepler_to_oscillator(const Vec3State& state, double mass, double phase);

// Euclidean embedding x = r (sin th cos ph, sin th sin ph, cos th) with a
// purely radial velocity of magnitude |rdot|.
Vec3State spherical_embedding(double r, double theta_in, double phi_in,
                              double rdot);

}  // namespace ksgeo
