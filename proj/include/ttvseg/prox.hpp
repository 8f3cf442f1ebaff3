#pragma once

#include <span>
#include <vector>

#include "ttvseg/diffops.hpp"
#include "ttvseg/image.hpp"

namespace ttvseg {

/// Transformed-l1 parameters: sparsity `a` > 0 and prox scale `lam` >= 0.
struct TL1Params {
  double a = 1.0;
  double lam = 0.0;

  void validate() const;
};

/// rho_a(t) = (a + 1)|t| / (a + |t|).
double rho_a(double t, double a);

/// Threshold below which the TL1 prox returns zero.
double tl1_threshold(const TL1Params& params);

/// argmin_y  lam * rho_a(y) + (y - t)^2 / 2, in closed form. Inputs with
/// |t| <= threshold (including the tie) map to zero; lam == 0 is the identity.
double tl1_prox_scalar(double t, const TL1Params& params);

/// Componentwise TL1 prox of both gradient components (anisotropic).
GradientField tl1_prox_field(const GradientField& g, const TL1Params& params);

/// Pixelwise isotropic shrinkage: (gx, gy) * max(r - lam, 0) / r.
GradientField l21_prox_field(const GradientField& g, double lam);

/// Euclidean projection onto the probability simplex (sort and threshold).
/// The result is renormalised so its entries sum to one.
std::vector<double> project_simplex(std::span<const double> y);

/// In-place variant on a caller-provided buffer; `scratch` must hold y.size() values.
void project_simplex_inplace(std::span<double> y, std::span<double> scratch);

/// Applies `project_simplex` at every pixel across the phase grids.
MembershipField project_membership(std::vector<ImageGrid> raw);

}  // namespace ttvseg
