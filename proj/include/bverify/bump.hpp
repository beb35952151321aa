#pragma once

#include <cmath>

#include "bverify/vec3.hpp"

namespace bverify {

// Smooth compactly supported profile exp(-1/(1-|x|^2)) on the open unit ball,
// zero outside.  Used for pressure/velocity corruption, for the mollifier
// kernel, and as the scalar profile of weak-form test functions.

// takes the squared radius, so callers never pay for a sqrt
inline double bump_profile(double r2) {
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

inline double bump(const Vec3& x) { return bump_profile(norm2(x)); }

// gradient of bump: -2 x / (1-|x|^2)^2 * bump(x)
inline Vec3 bump_grad(const Vec3& x) {
  double r2 = norm2(x);
  if (r2 >= 1.0) return {};
  double d = 1.0 - r2;
  return (-2.0 * bump_profile(r2) / (d * d)) * x;
}

// 1 / integral of bump over the unit ball, frozen to 17 significant digits
// (computed by 200-node Gauss-Legendre radial quadrature; the unit tests
// recompute it independently).
inline constexpr double kBumpNormalization = 2.2671167396083265;

// mollifier kernel rho_eps(z) = eps^-3 rho(z/eps), unit mass, support B_eps
inline double mollifier_rho(const Vec3& z, double eps) {
  double s = 1.0 / eps;
  return kBumpNormalization * s * s * s * bump_profile(norm2(z) * s * s);
}

}  // namespace bverify
