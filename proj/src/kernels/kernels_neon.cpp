// NEON (AArch64, two double lanes) variants of the scalar kernels. Advanced
// SIMD is mandatory on AArch64, so no runtime check is needed.

#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"
#include "tl1_scalar.hpp"

namespace ttvseg::kernels::neon {

namespace {
constexpr std::size_t kLanes = 2;
}

void forward_diff(const double* u, double* gx, double* gy, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = u + i * cols;
    const double* below = u + ((i + 1) % rows) * cols;
    double* ox = gx + i * cols;
    double* oy = gy + i * cols;

    std::size_t j = 0;
    for (; j + kLanes < cols; j += kLanes) {
      vst1q_f64(ox + j, vsubq_f64(vld1q_f64(row + j + 1), vld1q_f64(row + j)));
    }
    for (; j + 1 < cols; ++j) ox[j] = row[j + 1] - row[j];
    ox[cols - 1] = row[0] - row[cols - 1];

    j = 0;
    for (; j + kLanes <= cols; j += kLanes) {
      vst1q_f64(oy + j, vsubq_f64(vld1q_f64(below + j), vld1q_f64(row + j)));
    }
    for (; j < cols; ++j) oy[j] = below[j] - row[j];
  }
}

void backward_div(const double* gx, const double* gy, double* out, std::size_t rows,
                  std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* x = gx + i * cols;
    const double* y = gy + i * cols;
    const double* above = gy + ((i + rows - 1) % rows) * cols;
    double* o = out + i * cols;
    o[0] = (x[0] - x[cols - 1]) + (y[0] - above[0]);

    std::size_t j = 1;
    for (; j + kLanes <= cols; j += kLanes) {
      const float64x2_t dx = vsubq_f64(vld1q_f64(x + j), vld1q_f64(x + j - 1));
      const float64x2_t dy = vsubq_f64(vld1q_f64(y + j), vld1q_f64(above + j));
      vst1q_f64(o + j, vaddq_f64(dx, dy));
    }
    for (; j < cols; ++j) o[j] = (x[j] - x[j - 1]) + (y[j] - above[j]);
  }
}

void shrink_l21(const double* gx, const double* gy, double* ox, double* oy, std::size_t n,
                double lam) {
  const float64x2_t vlam = vdupq_n_f64(lam);
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const float64x2_t x = vld1q_f64(gx + k);
    const float64x2_t y = vld1q_f64(gy + k);
    const float64x2_t r = vsqrtq_f64(vaddq_f64(vmulq_f64(x, x), vmulq_f64(y, y)));
    const float64x2_t excess = vsubq_f64(r, vlam);
    const uint64x2_t keep = vcgtq_f64(excess, zero);
    const float64x2_t s = vbslq_f64(keep, vdivq_f64(excess, r), zero);
    vst1q_f64(ox + k, vmulq_f64(s, x));
    vst1q_f64(oy + k, vmulq_f64(s, y));
  }
  for (; k < n; ++k) {
    const double r = std::sqrt(gx[k] * gx[k] + gy[k] * gy[k]);
    const double excess = r - lam;
    const double s = excess > 0.0 ? excess / r : 0.0;
    ox[k] = s * gx[k];
    oy[k] = s * gy[k];
  }
}

void tl1_prox(const double* in, double* out, std::size_t n, double a, double lam, double tau) {
  if (lam == 0.0) {
    for (std::size_t k = 0; k < n; ++k) out[k] = in[k];
    return;
  }
  const float64x2_t vtau = vdupq_n_f64(tau);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const uint64x2_t small = vcleq_f64(vabsq_f64(vld1q_f64(in + k)), vtau);
    const bool s0 = vgetq_lane_u64(small, 0) != 0;
    const bool s1 = vgetq_lane_u64(small, 1) != 0;
    out[k] = s0 ? 0.0 : detail::tl1_shrink(in[k], a, lam, tau);
    out[k + 1] = s1 ? 0.0 : detail::tl1_shrink(in[k + 1], a, lam, tau);
  }
  for (; k < n; ++k) out[k] = detail::tl1_shrink(in[k], a, lam, tau);
}

void ascent(double* acc, const double* x, const double* y, std::size_t n, double beta) {
  const float64x2_t vb = vdupq_n_f64(beta);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + k), vld1q_f64(y + k));
    vst1q_f64(acc + k, vaddq_f64(vld1q_f64(acc + k), vmulq_f64(vb, d)));
  }
  for (; k < n; ++k) acc[k] = acc[k] + beta * (x[k] - y[k]);
}

void fidelity_shift(const double* v, const double* f, const double* p, double c, double beta1,
                    double* out, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vb = vdupq_n_f64(beta1);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const float64x2_t r = vsubq_f64(vld1q_f64(f + k), vc);
    const float64x2_t num = vaddq_f64(vmulq_f64(r, r), vld1q_f64(p + k));
    vst1q_f64(out + k, vsubq_f64(vld1q_f64(v + k), vdivq_f64(num, vb)));
  }
  for (; k < n; ++k) {
    const double r = f[k] - c;
    out[k] = v[k] - (r * r + p[k]) / beta1;
  }
}

void sub_scaled(const double* a, const double* b, double s, double* out, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    vst1q_f64(out + k, vsubq_f64(vld1q_f64(a + k), vmulq_f64(vs, vld1q_f64(b + k))));
  }
  for (; k < n; ++k) out[k] = a[k] - s * b[k];
}

void add_quotient(const double* a, const double* b, double s, double* out, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    vst1q_f64(out + k, vaddq_f64(vld1q_f64(a + k), vdivq_f64(vld1q_f64(b + k), vs)));
  }
  for (; k < n; ++k) out[k] = a[k] + b[k] / s;
}

void screened_rhs(const double* p, const double* u, const double* d, double beta1, double* out,
                  std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(beta1);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const float64x2_t pu = vaddq_f64(vld1q_f64(p + k), vmulq_f64(vb, vld1q_f64(u + k)));
    vst1q_f64(out + k, vaddq_f64(pu, vld1q_f64(d + k)));
  }
  for (; k < n; ++k) out[k] = (p[k] + beta1 * u[k]) + d[k];
}

void spectral_divide(double* z, const double* denom, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    vst1q_f64(z + 2 * k, vdivq_f64(vld1q_f64(z + 2 * k), vdupq_n_f64(denom[k])));
  }
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + k), vld1q_f64(b + k));
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; k < n; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const float64x2_t x = vld1q_f64(a + k);
    acc = vaddq_f64(acc, vmulq_f64(x, x));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; k < n; ++k) s += a[k] * a[k];
  return s;
}

}  // namespace ttvseg::kernels::neon

namespace ttvseg::kernels {

const KernelTable& neon_kernels() {
  static const KernelTable table{
      Backend::Neon,       neon::forward_diff, neon::backward_div, neon::shrink_l21,
      neon::tl1_prox,      neon::ascent,       neon::fidelity_shift, neon::sub_scaled,
      neon::add_quotient,  neon::screened_rhs, neon::spectral_divide, neon::sum_sq_diff,
      neon::sum_sq,
  };
  return table;
}

}  // namespace ttvseg::kernels
