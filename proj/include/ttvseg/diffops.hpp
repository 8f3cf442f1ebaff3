#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "ttvseg/image.hpp"

namespace ttvseg {

/// Element of Y = X x X: horizontal and vertical components.
struct GradientField {
  ImageGrid gx;
  ImageGrid gy;

  GradientField() = default;
  GradientField(std::size_t rows, std::size_t cols) : gx(rows, cols), gy(rows, cols) {}
  GradientField(ImageGrid x, ImageGrid y);

  std::size_t rows() const { return gx.rows(); }
  std::size_t cols() const { return gx.cols(); }

  friend bool operator==(const GradientField&, const GradientField&) = default;
};

/// Forward differences with periodic wraparound.
GradientField gradient(const ImageGrid& u);

/// Backward differences with periodic wraparound; the negative adjoint of
/// `gradient`, so <gradient(u), g> = -<u, divergence(g)>.
ImageGrid divergence(const GradientField& g);

/// Fourier multipliers of the periodic Laplacian -grad^T grad:
/// 2cos(2 pi i / m) + 2cos(2 pi j / n) - 4, stored row-major over the full m x n grid.
class LaplacianSpectrum {
public:
  LaplacianSpectrum(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return eig_[i * cols_ + j]; }
  const std::vector<double>& eigenvalues() const { return eig_; }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> eig_;
};

inline LaplacianSpectrum laplacian_spectrum(std::size_t rows, std::size_t cols) {
  return LaplacianSpectrum(rows, cols);
}

/// Reusable solver for (beta1 I - beta2 Laplacian) v = rhs on one grid shape.
/// Owns FFTW plans and scratch buffers; one instance must not be used from
/// two threads at once, but separate instances are independent.
class ScreenedPoissonSolver {
public:
  ScreenedPoissonSolver(const LaplacianSpectrum& spectrum, double beta1, double beta2);
  ~ScreenedPoissonSolver();
  ScreenedPoissonSolver(ScreenedPoissonSolver&&) noexcept;
  ScreenedPoissonSolver& operator=(ScreenedPoissonSolver&&) noexcept;

  ImageGrid solve(const ImageGrid& rhs);
  void solve(const ImageGrid& rhs, ImageGrid& out);

  std::size_t rows() const;
  std::size_t cols() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ImageGrid solve_screened_poisson(const ImageGrid& rhs, double beta1, double beta2,
                                 const LaplacianSpectrum& spectrum);

/// (beta1 I - beta2 Laplacian) v evaluated in the spatial domain.
ImageGrid apply_screened_operator(const ImageGrid& v, double beta1, double beta2);

double inner(const ImageGrid& a, const ImageGrid& b);
double inner(const GradientField& a, const GradientField& b);

}  // namespace ttvseg
