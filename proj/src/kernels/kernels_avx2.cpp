// AVX2 variants of the scalar kernels. This file is compiled with -mavx2 and
// must only be entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"
#include "tl1_scalar.hpp"

namespace ttvseg::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

void forward_diff(const double* u, double* gx, double* gy, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = u + i * cols;
    const double* below = u + ((i + 1) % rows) * cols;
    double* ox = gx + i * cols;
    double* oy = gy + i * cols;

    std::size_t j = 0;
    for (; j + kLanes < cols; j += kLanes) {
      const __m256d here = _mm256_loadu_pd(row + j);
      const __m256d next = _mm256_loadu_pd(row + j + 1);
      _mm256_storeu_pd(ox + j, _mm256_sub_pd(next, here));
    }
    for (; j + 1 < cols; ++j) ox[j] = row[j + 1] - row[j];
    ox[cols - 1] = row[0] - row[cols - 1];

    j = 0;
    for (; j + kLanes <= cols; j += kLanes) {
      _mm256_storeu_pd(oy + j, _mm256_sub_pd(_mm256_loadu_pd(below + j), _mm256_loadu_pd(row + j)));
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
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(x + j - 1));
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + j), _mm256_loadu_pd(above + j));
      _mm256_storeu_pd(o + j, _mm256_add_pd(dx, dy));
    }
    for (; j < cols; ++j) o[j] = (x[j] - x[j - 1]) + (y[j] - above[j]);
  }
}

void shrink_l21(const double* gx, const double* gy, double* ox, double* oy, std::size_t n,
                double lam) {
  const __m256d vlam = _mm256_set1_pd(lam);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d x = _mm256_loadu_pd(gx + k);
    const __m256d y = _mm256_loadu_pd(gy + k);
    const __m256d r = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
    const __m256d excess = _mm256_sub_pd(r, vlam);
    const __m256d keep = _mm256_cmp_pd(excess, zero, _CMP_GT_OQ);
    // Lanes with r == 0 divide 0/0 here; the mask discards them.
    const __m256d s = _mm256_and_pd(keep, _mm256_div_pd(excess, r));
    _mm256_storeu_pd(ox + k, _mm256_mul_pd(s, x));
    _mm256_storeu_pd(oy + k, _mm256_mul_pd(s, y));
  }
  for (; k < n; ++k) {
    const double r = std::sqrt(gx[k] * gx[k] + gy[k] * gy[k]);
    const double excess = r - lam;
    const double s = excess > 0.0 ? excess / r : 0.0;
    ox[k] = s * gx[k];
    oy[k] = s * gy[k];
  }
}

// The closed form needs acos/cos, so only the threshold test is vectorized:
// blocks that fall entirely inside [-tau, tau] are zeroed without touching
// the transcendental path. Gradients of piecewise-constant fields are mostly
// such blocks.
void tl1_prox(const double* in, double* out, std::size_t n, double a, double lam, double tau) {
  if (lam == 0.0) {
    for (std::size_t k = 0; k < n; ++k) out[k] = in[k];
    return;
  }
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d t = _mm256_loadu_pd(in + k);
    const __m256d mag = _mm256_andnot_pd(sign_mask, t);
    const int small = _mm256_movemask_pd(_mm256_cmp_pd(mag, vtau, _CMP_LE_OQ));
    if (small == 0xF) {
      _mm256_storeu_pd(out + k, _mm256_setzero_pd());
      continue;
    }
    for (std::size_t l = 0; l < kLanes; ++l) {
      out[k + l] = (small >> l) & 1 ? 0.0 : detail::tl1_shrink(in[k + l], a, lam, tau);
    }
  }
  for (; k < n; ++k) out[k] = detail::tl1_shrink(in[k], a, lam, tau);
}

void ascent(double* acc, const double* x, const double* y, std::size_t n, double beta) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
    _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), _mm256_mul_pd(vb, d)));
  }
  for (; k < n; ++k) acc[k] = acc[k] + beta * (x[k] - y[k]);
}

void fidelity_shift(const double* v, const double* f, const double* p, double c, double beta1,
                    double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vb = _mm256_set1_pd(beta1);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(f + k), vc);
    const __m256d num = _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_loadu_pd(p + k));
    _mm256_storeu_pd(out + k, _mm256_sub_pd(_mm256_loadu_pd(v + k), _mm256_div_pd(num, vb)));
  }
  for (; k < n; ++k) {
    const double r = f[k] - c;
    out[k] = v[k] - (r * r + p[k]) / beta1;
  }
}

void sub_scaled(const double* a, const double* b, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    _mm256_storeu_pd(out + k, _mm256_sub_pd(_mm256_loadu_pd(a + k),
                                            _mm256_mul_pd(vs, _mm256_loadu_pd(b + k))));
  }
  for (; k < n; ++k) out[k] = a[k] - s * b[k];
}

void add_quotient(const double* a, const double* b, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(a + k),
                                            _mm256_div_pd(_mm256_loadu_pd(b + k), vs)));
  }
  for (; k < n; ++k) out[k] = a[k] + b[k] / s;
}

void screened_rhs(const double* p, const double* u, const double* d, double beta1, double* out,
                  std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta1);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d pu = _mm256_add_pd(_mm256_loadu_pd(p + k), _mm256_mul_pd(vb, _mm256_loadu_pd(u + k)));
    _mm256_storeu_pd(out + k, _mm256_add_pd(pu, _mm256_loadu_pd(d + k)));
  }
  for (; k < n; ++k) out[k] = (p[k] + beta1 * u[k]) + d[k];
}

void spectral_divide(double* z, const double* denom, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    // (d0, d1) -> (d0, d0, d1, d1) to line up with (re0, im0, re1, im1).
    const __m256d d = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(denom + k)), 0x50);
    _mm256_storeu_pd(z + 2 * k, _mm256_div_pd(_mm256_loadu_pd(z + 2 * k), d));
  }
  for (; k < n; ++k) {
    z[2 * k] = z[2 * k] / denom[k];
    z[2 * k + 1] = z[2 * k + 1] / denom[k];
  }
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; k < n; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d x = _mm256_loadu_pd(a + k);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(x, x));
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += a[k] * a[k];
  return s;
}

}  // namespace ttvseg::kernels::avx2

namespace ttvseg::kernels {

const KernelTable& avx2_kernels() {
  static const KernelTable table{
      Backend::Avx2,       avx2::forward_diff, avx2::backward_div, avx2::shrink_l21,
      avx2::tl1_prox,      avx2::ascent,       avx2::fidelity_shift, avx2::sub_scaled,
      avx2::add_quotient,  avx2::screened_rhs, avx2::spectral_divide, avx2::sum_sq_diff,
      avx2::sum_sq,
  };
  return table;
}

}  // namespace ttvseg::kernels
