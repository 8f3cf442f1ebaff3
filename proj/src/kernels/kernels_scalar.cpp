#include <cmath>

#include "kernels_internal.hpp"
#include "tl1_scalar.hpp"

namespace ttvseg::kernels::scalar {

void forward_diff(const double* u, double* gx, double* gy, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = u + i * cols;
    const double* below = u + ((i + 1) % rows) * cols;
    double* ox = gx + i * cols;
    double* oy = gy + i * cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) ox[j] = row[j + 1] - row[j];
    ox[cols - 1] = row[0] - row[cols - 1];
    for (std::size_t j = 0; j < cols; ++j) oy[j] = below[j] - row[j];
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
    for (std::size_t j = 1; j < cols; ++j) o[j] = (x[j] - x[j - 1]) + (y[j] - above[j]);
  }
}

void shrink_l21(const double* gx, const double* gy, double* ox, double* oy, std::size_t n,
                double lam) {
  for (std::size_t k = 0; k < n; ++k) {
    const double r = std::sqrt(gx[k] * gx[k] + gy[k] * gy[k]);
    const double excess = r - lam;
    const double s = excess > 0.0 ? excess / r : 0.0;
    ox[k] = s * gx[k];
    oy[k] = s * gy[k];
  }
}

void tl1_prox(const double* in, double* out, std::size_t n, double a, double lam, double tau) {
  for (std::size_t k = 0; k < n; ++k) out[k] = detail::tl1_shrink(in[k], a, lam, tau);
}

void ascent(double* acc, const double* x, const double* y, std::size_t n, double beta) {
  for (std::size_t k = 0; k < n; ++k) acc[k] = acc[k] + beta * (x[k] - y[k]);
}

void fidelity_shift(const double* v, const double* f, const double* p, double c, double beta1,
                    double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double r = f[k] - c;
    out[k] = v[k] - (r * r + p[k]) / beta1;
  }
}

void sub_scaled(const double* a, const double* b, double s, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] - s * b[k];
}

void add_quotient(const double* a, const double* b, double s, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + b[k] / s;
}

void screened_rhs(const double* p, const double* u, const double* d, double beta1, double* out,
                  std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = (p[k] + beta1 * u[k]) + d[k];
}

void spectral_divide(double* z, const double* denom, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    z[2 * k] = z[2 * k] / denom[k];
    z[2 * k + 1] = z[2 * k + 1] / denom[k];
  }
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * a[k];
  return s;
}

}  // namespace ttvseg::kernels::scalar

namespace ttvseg::kernels {

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      Backend::Scalar,       scalar::forward_diff, scalar::backward_div, scalar::shrink_l21,
      scalar::tl1_prox,      scalar::ascent,       scalar::fidelity_shift, scalar::sub_scaled,
      scalar::add_quotient,  scalar::screened_rhs, scalar::spectral_divide, scalar::sum_sq_diff,
      scalar::sum_sq,
  };
  return table;
}

}  // namespace ttvseg::kernels
