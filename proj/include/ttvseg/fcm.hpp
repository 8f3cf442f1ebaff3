#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ttvseg/image.hpp"

namespace ttvseg {

struct FcmConfig {
  std::size_t clusters = 2;
  double fuzzifier = 2.0;  // m > 1
  std::size_t max_iter = 100;
  double tol = 1e-5;       // on the largest centroid move
  std::uint64_t seed = 0;  // drives the random restarts only
  std::size_t restarts = 0;

  void validate() const;
};

struct FcmResult {
  MembershipField memberships;
  std::vector<double> centroids;  // ascending; memberships permuted to match
  std::size_t iterations = 0;
  /// Objective sum_x sum_k u_k(x)^m (f(x) - c_k)^2 after each iteration.
  std::vector<double> objective_history;
};

/// Fuzzy c-means on scalar intensities. The deterministic start uses the
/// N evenly spaced quantiles (k + 1/2) / N of the intensity distribution,
/// falling back to evenly spaced levels over [min, max] when quantiles
/// coincide. With `restarts` > 0, extra runs start from centroids drawn from
/// the pixels with the seeded RNG; the lowest final objective wins.
FcmResult fuzzy_cmeans(const ImageGrid& f, const FcmConfig& config);

/// Initial centroids for the deterministic start.
std::vector<double> fcm_initial_centroids(const ImageGrid& f, std::size_t clusters);

/// Objective value for given memberships and centroids.
double fcm_objective(const ImageGrid& f, const std::vector<ImageGrid>& u,
                     const std::vector<double>& centroids, double fuzzifier);

}  // namespace ttvseg
