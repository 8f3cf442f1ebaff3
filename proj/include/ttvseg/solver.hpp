#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ttvseg/diffops.hpp"
#include "ttvseg/image.hpp"

namespace ttvseg {

enum class Regularizer { TTV, TV };

std::string_view to_string(Regularizer r);
Regularizer parse_regularizer(std::string_view s);

struct SolverConfig {
  std::size_t phases = 2;
  double lam = 0.01;
  double a = 10.0;  // TL1 sparsity, unused for TV
  double beta1 = 0.25;
  double beta2 = 0.25;
  std::size_t max_iter = 200;
  double tol = 1e-4;
  Regularizer regularizer = Regularizer::TTV;

  void validate() const;
};

/// All ADMM iterates. V, D, p and q hold one entry per phase.
struct SolverState {
  MembershipField U;
  std::vector<ImageGrid> V;
  std::vector<GradientField> D;
  std::vector<ImageGrid> p;      // multiplier for U = V
  std::vector<GradientField> q;  // multipliers for grad v_k = d_k
  std::vector<double> c;         // phase centroids
  std::size_t iter = 0;
  std::vector<double> rel_change_history;
  // ||U - V||_F and sum_k ||grad v_k - d_k||_F after each step.
  std::vector<double> primal_uv_history;
  std::vector<double> primal_grad_history;
};

SolverState init_state(const ImageGrid& f, const SolverConfig& config, const MembershipField& u0,
                       std::vector<double> c0);

/// proj_S(V - (F + p) / beta1) with F_k = (f - c_k)^2.
MembershipField update_U(const SolverState& state, const ImageGrid& f, const SolverConfig& config);

/// Prox of grad v_k + q_k / beta2 with scale lam / beta2 (TL1 or isotropic l2,1).
std::vector<GradientField> update_D(const SolverState& state, const SolverConfig& config);

/// Screened Poisson solve per phase with rhs p_k + beta1 u_k + div(q_k - beta2 d_k).
std::vector<ImageGrid> update_V(const SolverState& state, const SolverConfig& config,
                                ScreenedPoissonSolver& poisson);
std::vector<ImageGrid> update_V(const SolverState& state, const SolverConfig& config,
                                const LaplacianSpectrum& spectrum);

/// Dual ascent: p += beta1 (U - V), q_k += beta2 (grad v_k - d_k).
std::pair<std::vector<ImageGrid>, std::vector<GradientField>> update_multipliers(
    const SolverState& state, const SolverConfig& config);

/// Membership-weighted means of f. Phases whose total membership is below
/// 1e-12 keep their previous centroid.
std::vector<double> update_c(const SolverState& state, const ImageGrid& f);

/// One ADMM iteration in the order U, D, V, p, q, c.
SolverState step(SolverState state, const ImageGrid& f, const SolverConfig& config,
                 ScreenedPoissonSolver& poisson);
SolverState step(SolverState state, const ImageGrid& f, const SolverConfig& config,
                 const LaplacianSpectrum& spectrum);

struct SolveResult {
  MembershipField U;
  std::vector<double> c;
  std::size_t iterations = 0;
  double final_rel_change = 0.0;
  std::vector<double> rel_change_history;
  std::vector<double> primal_uv_history;
  std::vector<double> primal_grad_history;
  double seconds = 0.0;
};

/// Called after every completed iteration.
using IterationObserver = std::function<void(const SolverState&)>;

/// Iterates `step` until the relative membership change drops below
/// config.tol or config.max_iter iterations have run. The first check sees
/// an infinite change, so at least one step runs whenever max_iter > 0.
SolveResult solve(const ImageGrid& f, const SolverConfig& config, const MembershipField& u0,
                  std::vector<double> c0, const IterationObserver& observer = {});

/// Model objective sum_k <(f - c_k)^2, u_k> + lam * R(grad u_k), where R is
/// the anisotropic TL1 sum (TTV) or the isotropic l2,1 norm (TV).
double energy(const MembershipField& u, std::span<const double> c, const ImageGrid& f,
              const SolverConfig& config);

}  // namespace ttvseg
