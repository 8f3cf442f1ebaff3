#pragma once

#include <cmath>

// Internal linkage: this header is also compiled into the SIMD translation
// units, and the linker must not fold their copies into the scalar one.
namespace ttvseg::kernels::detail {
namespace {

// Closed-form TL1 shrinkage of one value past the threshold test. Shared by
// every backend so the transcendental part is computed identically.
double tl1_shrink(double t, double a, double lam, double tau) {
  if (lam == 0.0) return t;
  const double mag = std::abs(t);
  if (mag <= tau) return 0.0;
  const double s = a + mag;
  // Roundoff can push the argument marginally past [-1, 1] right above tau.
  double arg = 1.0 - 27.0 * lam * a * (a + 1.0) / (2.0 * s * s * s);
  arg = arg < -1.0 ? -1.0 : (arg > 1.0 ? 1.0 : arg);
  const double phi = std::acos(arg);
  const double y = (2.0 / 3.0) * s * std::cos(phi / 3.0) - 2.0 * a / 3.0 + mag / 3.0;
  return t < 0.0 ? -y : y;
}

}  // namespace

}  // namespace ttvseg::kernels::detail
