#include "ttvseg/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ttvseg {

void FcmConfig::validate() const {
  if (clusters < 2) throw std::invalid_argument("fcm: need at least 2 clusters");
  if (!(fuzzifier > 1.0)) throw std::invalid_argument("fcm: fuzzifier must be > 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("fcm: tol must be >= 0");
}

namespace {

// Memberships for fixed centroids. A pixel sitting exactly on a centroid
// belongs fully to the lowest-indexed such cluster.
void update_memberships(const ImageGrid& f, const std::vector<double>& c, double exponent,
                        std::vector<ImageGrid>& u) {
  const std::size_t n_clusters = c.size();
  std::vector<double> dist_sq(n_clusters);
  for (std::size_t x = 0; x < f.size(); ++x) {
    std::size_t hit = n_clusters;
    for (std::size_t k = 0; k < n_clusters; ++k) {
      const double r = f[x] - c[k];
      dist_sq[k] = r * r;
      if (dist_sq[k] == 0.0 && hit == n_clusters) hit = k;
    }
    if (hit < n_clusters) {
      for (std::size_t k = 0; k < n_clusters; ++k) u[k][x] = k == hit ? 1.0 : 0.0;
      continue;
    }
    for (std::size_t k = 0; k < n_clusters; ++k) {
      double denom = 0.0;
      for (std::size_t j = 0; j < n_clusters; ++j) {
        const double ratio = dist_sq[k] / dist_sq[j];
        denom += exponent == 1.0 ? ratio : std::pow(ratio, exponent);
      }
      u[k][x] = 1.0 / denom;
    }
  }
}

std::vector<double> update_centroids(const ImageGrid& f, const std::vector<ImageGrid>& u,
                                     double m, const std::vector<double>& previous) {
  std::vector<double> c = previous;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) {
      const double w = m == 2.0 ? u[k][x] * u[k][x] : std::pow(u[k][x], m);
      num += w * f[x];
      den += w;
    }
    if (den > 0.0) c[k] = num / den;
  }
  return c;
}

struct Run {
  std::vector<ImageGrid> u;
  std::vector<double> c;
  std::size_t iterations = 0;
  std::vector<double> history;
};

Run run_from(const ImageGrid& f, const FcmConfig& cfg, std::vector<double> c) {
  Run r;
  r.u.assign(c.size(), ImageGrid(f.rows(), f.cols()));
  r.c = std::move(c);
  // u_k = 1 / sum_j (d_k / d_j)^(2 / (m - 1)), written on squared distances.
  const double exponent = 1.0 / (cfg.fuzzifier - 1.0);
  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    update_memberships(f, r.c, exponent, r.u);
    std::vector<double> next = update_centroids(f, r.u, cfg.fuzzifier, r.c);
    double moved = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) moved = std::max(moved, std::abs(next[k] - r.c[k]));
    r.c = std::move(next);
    r.history.push_back(fcm_objective(f, r.u, r.c, cfg.fuzzifier));
    r.iterations = it + 1;
    if (moved < cfg.tol) break;
  }
  if (r.iterations == 0) update_memberships(f, r.c, exponent, r.u);
  return r;
}

}  // namespace

double fcm_objective(const ImageGrid& f, const std::vector<ImageGrid>& u,
                     const std::vector<double>& c, double m) {
  double j = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    for (std::size_t x = 0; x < f.size(); ++x) {
      const double r = f[x] - c[k];
      const double w = m == 2.0 ? u[k][x] * u[k][x] : std::pow(u[k][x], m);
      j += w * r * r;
    }
  }
  return j;
}

std::vector<double> fcm_initial_centroids(const ImageGrid& f, std::size_t clusters) {
  if (f.empty()) throw std::invalid_argument("fcm: empty image");
  std::vector<double> sorted(f.values().begin(), f.values().end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> c(clusters);
  for (std::size_t k = 0; k < clusters; ++k) {
    const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(clusters);
    c[k] = sorted[std::min(n - 1, static_cast<std::size_t>(q * static_cast<double>(n)))];
  }
  if (std::adjacent_find(c.begin(), c.end()) != c.end()) {
    // Identical starting centroids never separate when no pixel sits on them.
    const double lo = sorted.front();
    const double hi = sorted.back();
    for (std::size_t k = 0; k < clusters; ++k) {
      c[k] = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(clusters);
    }
  }
  return c;
}

FcmResult fuzzy_cmeans(const ImageGrid& f, const FcmConfig& config) {
  config.validate();
  Run best = run_from(f, config, fcm_initial_centroids(f, config.clusters));

  if (config.restarts > 0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<std::size_t> pick(0, f.size() - 1);
    for (std::size_t r = 0; r < config.restarts; ++r) {
      std::vector<double> c(config.clusters);
      for (double& v : c) v = f[pick(rng)];
      std::sort(c.begin(), c.end());
      Run trial = run_from(f, config, std::move(c));
      if (!trial.history.empty() && !best.history.empty() &&
          trial.history.back() < best.history.back()) {
        best = std::move(trial);
      }
    }
  }

  // Canonical phase order: ascending centroids (stable for ties).
  std::vector<std::size_t> order(config.clusters);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return best.c[a] < best.c[b]; });
  FcmResult out;
  std::vector<ImageGrid> grids;
  for (std::size_t k : order) {
    out.centroids.push_back(best.c[k]);
    grids.push_back(std::move(best.u[k]));
  }
  out.memberships = MembershipField(std::move(grids));
  out.iterations = best.iterations;
  out.objective_history = std::move(best.history);
  return out;
}

}  // namespace ttvseg
