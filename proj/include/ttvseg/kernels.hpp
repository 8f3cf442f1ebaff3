#pragma once

#include <cstddef>
#include <string_view>

// Raw-pointer inner loops behind the field operations. Every kernel has a
// scalar reference implementation; SIMD variants must reproduce it exactly
// (same operation order, no contraction) except for the reductions, whose
// lane-wise summation order differs.

namespace ttvseg::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;

  // gx(i,j) = u(i,j+1) - u(i,j), gy(i,j) = u(i+1,j) - u(i,j), indices mod (rows, cols).
  void (*forward_diff)(const double* u, double* gx, double* gy, std::size_t rows,
                       std::size_t cols);
  // out(i,j) = gx(i,j) - gx(i,j-1) + gy(i,j) - gy(i-1,j), periodic.
  void (*backward_div)(const double* gx, const double* gy, double* out, std::size_t rows,
                       std::size_t cols);
  // Pixelwise isotropic shrinkage of (gx, gy) by lam.
  void (*shrink_l21)(const double* gx, const double* gy, double* ox, double* oy, std::size_t n,
                     double lam);
  // Componentwise TL1 prox; entries with |t| <= tau map to zero.
  void (*tl1_prox)(const double* in, double* out, std::size_t n, double a, double lam,
                   double tau);
  // acc += beta * (x - y)
  void (*ascent)(double* acc, const double* x, const double* y, std::size_t n, double beta);
  // out = v - ((f - c)^2 + p) / beta1
  void (*fidelity_shift)(const double* v, const double* f, const double* p, double c,
                         double beta1, double* out, std::size_t n);
  // out = a - s * b
  void (*sub_scaled)(const double* a, const double* b, double s, double* out, std::size_t n);
  // out = a + b / s
  void (*add_quotient)(const double* a, const double* b, double s, double* out, std::size_t n);
  // out = p + beta1 * u + d
  void (*screened_rhs)(const double* p, const double* u, const double* d, double beta1,
                       double* out, std::size_t n);
  // Divides n interleaved complex values by the real denominators.
  void (*spectral_divide)(double* interleaved, const double* denom, std::size_t n);
  // sum (a - b)^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // sum a^2
  double (*sum_sq)(const double* a, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Kernel table for `b`, or nullptr when the backend is not compiled in or
/// the CPU does not support it.
const KernelTable* kernels_for(Backend b);

/// The table used by the library. Picks the widest supported backend at first
/// use; the environment variable TTVSEG_SIMD=scalar|avx2|neon overrides.
const KernelTable& active();

/// Forces the active backend. Throws if unavailable.
void set_active(Backend b);

std::string_view backend_name(Backend b);

}  // namespace ttvseg::kernels
