#include "ttvseg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kernels/tl1_scalar.hpp"
#include "ttvseg/kernels.hpp"

namespace ttvseg {

void TL1Params::validate() const {
  if (!(a > 0.0)) throw std::invalid_argument("TL1: a must be > 0");
  if (!(lam >= 0.0)) throw std::invalid_argument("TL1: lam must be >= 0");
}

double rho_a(double t, double a) {
  const double m = std::abs(t);
  return (a + 1.0) * m / (a + m);
}

double tl1_threshold(const TL1Params& p) {
  p.validate();
  const double a = p.a;
  if (p.lam > a * a / (2.0 * (a + 1.0))) return std::sqrt(2.0 * p.lam * (a + 1.0)) - a / 2.0;
  return p.lam * (a + 1.0) / a;
}

double tl1_prox_scalar(double t, const TL1Params& params) {
  const double tau = tl1_threshold(params);
  return kernels::detail::tl1_shrink(t, params.a, params.lam, tau);
}

GradientField tl1_prox_field(const GradientField& g, const TL1Params& params) {
  const double tau = tl1_threshold(params);
  GradientField out(g.rows(), g.cols());
  const auto& k = kernels::active();
  k.tl1_prox(g.gx.data(), out.gx.data(), g.gx.size(), params.a, params.lam, tau);
  k.tl1_prox(g.gy.data(), out.gy.data(), g.gy.size(), params.a, params.lam, tau);
  return out;
}

GradientField l21_prox_field(const GradientField& g, double lam) {
  if (!(lam >= 0.0)) throw std::invalid_argument("l21_prox_field: lam must be >= 0");
  if (!g.gx.same_shape(g.gy)) throw std::invalid_argument("l21_prox_field: shape mismatch");
  GradientField out(g.rows(), g.cols());
  kernels::active().shrink_l21(g.gx.data(), g.gy.data(), out.gx.data(), out.gy.data(),
                               g.gx.size(), lam);
  return out;
}

void project_simplex_inplace(std::span<double> y, std::span<double> scratch) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("project_simplex: empty vector");

  // Already on the simplex up to summation roundoff: keep it bit for bit so
  // projection is idempotent.
  const double slack = 4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  if (std::all_of(y.begin(), y.end(), [](double v) { return v >= 0.0; }) &&
      std::abs(std::accumulate(y.begin(), y.end(), 0.0) - 1.0) <= slack) {
    return;
  }

  std::copy(y.begin(), y.end(), scratch.begin());
  std::sort(scratch.begin(), scratch.begin() + n, std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    prefix += scratch[j];
    const double candidate = (prefix - 1.0) / static_cast<double>(j + 1);
    // The support is the longest sorted prefix whose entries stay above theta.
    if (scratch[j] - candidate > 0.0) theta = candidate;
  }

  double sum = 0.0;
  for (double& v : y) {
    v = std::max(v - theta, 0.0);
    sum += v;
  }
  if (sum != 1.0) {
    for (double& v : y) v /= sum;
  }
}

std::vector<double> project_simplex(std::span<const double> y) {
  std::vector<double> out(y.begin(), y.end());
  std::vector<double> scratch(y.size());
  project_simplex_inplace(out, scratch);
  return out;
}

MembershipField project_membership(std::vector<ImageGrid> raw) {
  if (raw.empty()) throw std::invalid_argument("project_membership: no phases");
  for (const auto& g : raw) {
    if (!g.same_shape(raw.front())) {
      throw std::invalid_argument("project_membership: phase grids differ in shape");
    }
  }
  const std::size_t phases = raw.size();
  const std::size_t pixels = raw.front().size();
  std::vector<double> y(phases), scratch(phases);
  for (std::size_t x = 0; x < pixels; ++x) {
    for (std::size_t k = 0; k < phases; ++k) y[k] = raw[k][x];
    project_simplex_inplace(y, scratch);
    for (std::size_t k = 0; k < phases; ++k) raw[k][x] = y[k];
  }
  return MembershipField::unchecked(std::move(raw));
}

}  // namespace ttvseg
