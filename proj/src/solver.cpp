#include "ttvseg/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ttvseg/kernels.hpp"
#include "ttvseg/prox.hpp"

namespace ttvseg {

std::string_view to_string(Regularizer r) { return r == Regularizer::TTV ? "ttv" : "tv"; }

Regularizer parse_regularizer(std::string_view s) {
  if (s == "ttv" || s == "TTV") return Regularizer::TTV;
  if (s == "tv" || s == "TV") return Regularizer::TV;
  throw std::invalid_argument("unknown regularizer '" + std::string(s) + "' (want ttv or tv)");
}

void SolverConfig::validate() const {
  if (phases < 2) throw std::invalid_argument("solver: phases must be >= 2");
  // lam == 0 is allowed: it degenerates to alternating projection and
  // centroid updates.
  if (!(lam >= 0.0)) throw std::invalid_argument("solver: lam must be >= 0");
  if (!(a > 0.0)) throw std::invalid_argument("solver: a must be > 0");
  if (!(beta1 > 0.0) || !(beta2 > 0.0)) throw std::invalid_argument("solver: beta1, beta2 must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("solver: tol must be > 0");
}

namespace {

double frobenius_sq(const std::vector<ImageGrid>& a) {
  const auto& k = kernels::active();
  double s = 0.0;
  for (const auto& g : a) s += k.sum_sq(g.data(), g.size());
  return s;
}

double frobenius_sq_diff(const std::vector<ImageGrid>& a, const std::vector<ImageGrid>& b) {
  const auto& k = kernels::active();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += k.sum_sq_diff(a[i].data(), b[i].data(), a[i].size());
  return s;
}

void check_image(const ImageGrid& f, const SolverState& state) {
  if (f.rows() != state.U.rows() || f.cols() != state.U.cols()) {
    throw std::invalid_argument("solver: image shape does not match state");
  }
}

}  // namespace

SolverState init_state(const ImageGrid& f, const SolverConfig& config, const MembershipField& u0,
                       std::vector<double> c0) {
  config.validate();
  if (f.empty()) throw std::invalid_argument("init_state: empty image");
  if (u0.phases() != config.phases) {
    throw std::invalid_argument("init_state: initial membership has " + std::to_string(u0.phases()) +
                                " phases, config says " + std::to_string(config.phases));
  }
  if (c0.size() != config.phases) {
    throw std::invalid_argument("init_state: need one initial centroid per phase");
  }
  if (u0.rows() != f.rows() || u0.cols() != f.cols()) {
    throw std::invalid_argument("init_state: membership shape does not match image");
  }

  SolverState s;
  s.U = u0;
  s.V = u0.grids();
  s.D.reserve(config.phases);
  for (const auto& v : s.V) s.D.push_back(gradient(v));
  s.p.assign(config.phases, ImageGrid(f.rows(), f.cols()));
  s.q.assign(config.phases, GradientField(f.rows(), f.cols()));
  s.c = std::move(c0);
  return s;
}

MembershipField update_U(const SolverState& state, const ImageGrid& f, const SolverConfig& config) {
  check_image(f, state);
  const auto& k = kernels::active();
  std::vector<ImageGrid> raw(state.V.size(), ImageGrid(f.rows(), f.cols()));
  for (std::size_t ph = 0; ph < raw.size(); ++ph) {
    k.fidelity_shift(state.V[ph].data(), f.data(), state.p[ph].data(), state.c[ph], config.beta1,
                     raw[ph].data(), f.size());
  }
  return project_membership(std::move(raw));
}

std::vector<GradientField> update_D(const SolverState& state, const SolverConfig& config) {
  const auto& k = kernels::active();
  const double scale = config.lam / config.beta2;
  std::vector<GradientField> out;
  out.reserve(state.V.size());
  for (std::size_t ph = 0; ph < state.V.size(); ++ph) {
    GradientField t = gradient(state.V[ph]);
    const GradientField& q = state.q[ph];
    k.add_quotient(t.gx.data(), q.gx.data(), config.beta2, t.gx.data(), t.gx.size());
    k.add_quotient(t.gy.data(), q.gy.data(), config.beta2, t.gy.data(), t.gy.size());
    if (config.regularizer == Regularizer::TTV) {
      out.push_back(tl1_prox_field(t, TL1Params{config.a, scale}));
    } else {
      out.push_back(l21_prox_field(t, scale));
    }
  }
  return out;
}

std::vector<ImageGrid> update_V(const SolverState& state, const SolverConfig& config,
                                ScreenedPoissonSolver& poisson) {
  const auto& k = kernels::active();
  const std::size_t rows = state.U.rows();
  const std::size_t cols = state.U.cols();
  const std::size_t n = rows * cols;
  std::vector<ImageGrid> out(state.V.size(), ImageGrid(rows, cols));
  GradientField w(rows, cols);
  ImageGrid rhs(rows, cols);
  for (std::size_t ph = 0; ph < state.V.size(); ++ph) {
    const GradientField& q = state.q[ph];
    const GradientField& d = state.D[ph];
    k.sub_scaled(q.gx.data(), d.gx.data(), config.beta2, w.gx.data(), n);
    k.sub_scaled(q.gy.data(), d.gy.data(), config.beta2, w.gy.data(), n);
    const ImageGrid div = divergence(w);
    k.screened_rhs(state.p[ph].data(), state.U[ph].data(), div.data(), config.beta1, rhs.data(), n);
    poisson.solve(rhs, out[ph]);
  }
  return out;
}

std::vector<ImageGrid> update_V(const SolverState& state, const SolverConfig& config,
                                const LaplacianSpectrum& spectrum) {
  ScreenedPoissonSolver poisson(spectrum, config.beta1, config.beta2);
  return update_V(state, config, poisson);
}

std::pair<std::vector<ImageGrid>, std::vector<GradientField>> update_multipliers(
    const SolverState& state, const SolverConfig& config) {
  const auto& k = kernels::active();
  auto p = state.p;
  auto q = state.q;
  for (std::size_t ph = 0; ph < p.size(); ++ph) {
    const std::size_t n = p[ph].size();
    k.ascent(p[ph].data(), state.U[ph].data(), state.V[ph].data(), n, config.beta1);
    const GradientField gv = gradient(state.V[ph]);
    k.ascent(q[ph].gx.data(), gv.gx.data(), state.D[ph].gx.data(), n, config.beta2);
    k.ascent(q[ph].gy.data(), gv.gy.data(), state.D[ph].gy.data(), n, config.beta2);
  }
  return {std::move(p), std::move(q)};
}

std::vector<double> update_c(const SolverState& state, const ImageGrid& f) {
  check_image(f, state);
  std::vector<double> c = state.c;
  for (std::size_t ph = 0; ph < state.U.phases(); ++ph) {
    const ImageGrid& u = state.U[ph];
    double mass = 0.0;
    double weighted = 0.0;
    for (std::size_t x = 0; x < u.size(); ++x) {
      mass += u[x];
      weighted += f[x] * u[x];
    }
    if (mass >= 1e-12) c[ph] = weighted / mass;
  }
  return c;
}

SolverState step(SolverState state, const ImageGrid& f, const SolverConfig& config,
                 ScreenedPoissonSolver& poisson) {
  MembershipField previous = state.U;
  state.U = update_U(state, f, config);
  state.D = update_D(state, config);
  state.V = update_V(state, config, poisson);
  auto [p, q] = update_multipliers(state, config);
  state.p = std::move(p);
  state.q = std::move(q);
  state.c = update_c(state, f);
  ++state.iter;

  const double norm_sq = frobenius_sq(state.U.grids());
  const double change_sq = frobenius_sq_diff(state.U.grids(), previous.grids());
  state.rel_change_history.push_back(norm_sq > 0.0 ? std::sqrt(change_sq / norm_sq) : 0.0);

  state.primal_uv_history.push_back(std::sqrt(frobenius_sq_diff(state.U.grids(), state.V)));
  const auto& k = kernels::active();
  double grad_res = 0.0;
  for (std::size_t ph = 0; ph < state.V.size(); ++ph) {
    const GradientField gv = gradient(state.V[ph]);
    const std::size_t n = gv.gx.size();
    grad_res += std::sqrt(k.sum_sq_diff(gv.gx.data(), state.D[ph].gx.data(), n) +
                          k.sum_sq_diff(gv.gy.data(), state.D[ph].gy.data(), n));
  }
  state.primal_grad_history.push_back(grad_res);
  return state;
}

SolverState step(SolverState state, const ImageGrid& f, const SolverConfig& config,
                 const LaplacianSpectrum& spectrum) {
  ScreenedPoissonSolver poisson(spectrum, config.beta1, config.beta2);
  return step(std::move(state), f, config, poisson);
}

SolveResult solve(const ImageGrid& f, const SolverConfig& config, const MembershipField& u0,
                  std::vector<double> c0, const IterationObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  SolverState state = init_state(f, config, u0, std::move(c0));
  ScreenedPoissonSolver poisson(LaplacianSpectrum(f.rows(), f.cols()), config.beta1, config.beta2);

  double change = std::numeric_limits<double>::infinity();
  while (state.iter < config.max_iter && !(change < config.tol)) {
    state = step(std::move(state), f, config, poisson);
    change = state.rel_change_history.back();
    if (observer) observer(state);
  }

  SolveResult r;
  r.U = std::move(state.U);
  r.c = std::move(state.c);
  r.iterations = state.iter;
  r.final_rel_change = state.rel_change_history.empty() ? 0.0 : state.rel_change_history.back();
  r.rel_change_history = std::move(state.rel_change_history);
  r.primal_uv_history = std::move(state.primal_uv_history);
  r.primal_grad_history = std::move(state.primal_grad_history);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double energy(const MembershipField& u, std::span<const double> c, const ImageGrid& f,
              const SolverConfig& config) {
  if (c.size() != u.phases()) throw std::invalid_argument("energy: centroid count mismatch");
  if (u.rows() != f.rows() || u.cols() != f.cols()) throw std::invalid_argument("energy: shape mismatch");
  double fidelity = 0.0;
  double reg = 0.0;
  for (std::size_t ph = 0; ph < u.phases(); ++ph) {
    for (std::size_t x = 0; x < f.size(); ++x) {
      const double r = f[x] - c[ph];
      fidelity += r * r * u[ph][x];
    }
    const GradientField g = gradient(u[ph]);
    for (std::size_t x = 0; x < f.size(); ++x) {
      if (config.regularizer == Regularizer::TTV) {
        reg += rho_a(g.gx[x], config.a) + rho_a(g.gy[x], config.a);
      } else {
        reg += std::hypot(g.gx[x], g.gy[x]);
      }
    }
  }
  return fidelity + config.lam * reg;
}

}  // namespace ttvseg
