#include "ttvseg/diffops.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "ttvseg/kernels.hpp"

namespace ttvseg {

namespace {

// FFTW's planner and plan destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

GradientField::GradientField(ImageGrid x, ImageGrid y) : gx(std::move(x)), gy(std::move(y)) {
  if (!gx.same_shape(gy)) throw std::invalid_argument("GradientField: component shapes differ");
}

GradientField gradient(const ImageGrid& u) {
  GradientField g(u.rows(), u.cols());
  if (u.empty()) return g;
  kernels::active().forward_diff(u.data(), g.gx.data(), g.gy.data(), u.rows(), u.cols());
  return g;
}

ImageGrid divergence(const GradientField& g) {
  if (!g.gx.same_shape(g.gy)) throw std::invalid_argument("divergence: component shapes differ");
  ImageGrid out(g.rows(), g.cols());
  if (out.empty()) return out;
  kernels::active().backward_div(g.gx.data(), g.gy.data(), out.data(), g.rows(), g.cols());
  return out;
}

LaplacianSpectrum::LaplacianSpectrum(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), eig_(rows * cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("laplacian_spectrum: empty grid");
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> ci(rows), cj(cols);
  for (std::size_t i = 0; i < rows; ++i) ci[i] = 2.0 * std::cos(two_pi * i / rows);
  for (std::size_t j = 0; j < cols; ++j) cj[j] = 2.0 * std::cos(two_pi * j / cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      // Clamp tiny positive roundoff so the multipliers stay in [-8, 0].
      eig_[i * cols + j] = std::min(0.0, ci[i] + cj[j] - 4.0);
    }
  }
}

struct ScreenedPoissonSolver::Impl {
  std::size_t rows;
  std::size_t cols;
  std::size_t half_cols;
  double* real_buf = nullptr;
  fftw_complex* freq_buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  // Per-frequency denominators for the r2c half spectrum, with the 1/(mn)
  // normalisation of the unnormalised inverse transform folded in.
  std::vector<double> denom;

  Impl(const LaplacianSpectrum& spec, double beta1, double beta2)
      : rows(spec.rows()), cols(spec.cols()), half_cols(spec.cols() / 2 + 1) {
    const double scale = static_cast<double>(rows * cols);
    denom.resize(rows * half_cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < half_cols; ++j) {
        denom[i * half_cols + j] = (beta1 - beta2 * spec(i, j)) * scale;
      }
    }
    std::lock_guard lock(fftw_planner_mutex());
    real_buf = fftw_alloc_real(rows * cols);
    freq_buf = fftw_alloc_complex(rows * half_cols);
    if (!real_buf || !freq_buf) {
      release();
      throw std::bad_alloc();
    }
    const int n0 = static_cast<int>(rows);
    const int n1 = static_cast<int>(cols);
    // FFTW_ESTIMATE keeps plans (and therefore results) independent of timing.
    forward = fftw_plan_dft_r2c_2d(n0, n1, real_buf, freq_buf, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(n0, n1, freq_buf, real_buf, FFTW_ESTIMATE);
    if (!forward || !backward) {
      release();
      throw std::runtime_error("ScreenedPoissonSolver: FFTW planning failed");
    }
  }

  ~Impl() {
    std::lock_guard lock(fftw_planner_mutex());
    release();
  }

  void release() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real_buf);
    fftw_free(freq_buf);
    forward = backward = nullptr;
    real_buf = nullptr;
    freq_buf = nullptr;
  }
};

ScreenedPoissonSolver::ScreenedPoissonSolver(const LaplacianSpectrum& spectrum, double beta1,
                                             double beta2) {
  if (!(beta1 > 0.0)) throw std::invalid_argument("screened Poisson solve: beta1 must be > 0");
  if (!(beta2 >= 0.0)) throw std::invalid_argument("screened Poisson solve: beta2 must be >= 0");
  impl_ = std::make_unique<Impl>(spectrum, beta1, beta2);
}

ScreenedPoissonSolver::~ScreenedPoissonSolver() = default;
ScreenedPoissonSolver::ScreenedPoissonSolver(ScreenedPoissonSolver&&) noexcept = default;
ScreenedPoissonSolver& ScreenedPoissonSolver::operator=(ScreenedPoissonSolver&&) noexcept = default;

std::size_t ScreenedPoissonSolver::rows() const { return impl_->rows; }
std::size_t ScreenedPoissonSolver::cols() const { return impl_->cols; }

void ScreenedPoissonSolver::solve(const ImageGrid& rhs, ImageGrid& out) {
  Impl& s = *impl_;
  if (rhs.rows() != s.rows || rhs.cols() != s.cols) {
    throw std::invalid_argument("screened Poisson solve: rhs shape does not match spectrum");
  }
  std::copy(rhs.values().begin(), rhs.values().end(), s.real_buf);
  fftw_execute(s.forward);
  kernels::active().spectral_divide(reinterpret_cast<double*>(s.freq_buf), s.denom.data(),
                                    s.denom.size());
  fftw_execute(s.backward);
  if (!out.same_shape(rhs)) out = ImageGrid(s.rows, s.cols);
  std::copy(s.real_buf, s.real_buf + rhs.size(), out.data());
}

ImageGrid ScreenedPoissonSolver::solve(const ImageGrid& rhs) {
  ImageGrid out(rhs.rows(), rhs.cols());
  solve(rhs, out);
  return out;
}

ImageGrid solve_screened_poisson(const ImageGrid& rhs, double beta1, double beta2,
                                 const LaplacianSpectrum& spectrum) {
  ScreenedPoissonSolver solver(spectrum, beta1, beta2);
  return solver.solve(rhs);
}

ImageGrid apply_screened_operator(const ImageGrid& v, double beta1, double beta2) {
  // Laplacian = divergence(gradient(.)) = -grad^T grad.
  const ImageGrid lap = divergence(gradient(v));
  ImageGrid out(v.rows(), v.cols());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = beta1 * v[k] - beta2 * lap[k];
  return out;
}

double inner(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("inner: shape mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double inner(const GradientField& a, const GradientField& b) {
  return inner(a.gx, b.gx) + inner(a.gy, b.gy);
}

}  // namespace ttvseg
