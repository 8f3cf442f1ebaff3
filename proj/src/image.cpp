#include "ttvseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace ttvseg {

ImageGrid::ImageGrid(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

ImageGrid::ImageGrid(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("ImageGrid: data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
}

bool ImageGrid::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

LabelMask::LabelMask(std::size_t rows, std::size_t cols, std::vector<std::uint32_t> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
  if (labels_.size() != rows * cols) {
    throw std::invalid_argument("LabelMask: label count does not match shape");
  }
}

std::uint32_t LabelMask::label_bound() const {
  if (labels_.empty()) return 0;
  return *std::max_element(labels_.begin(), labels_.end()) + 1;
}

MembershipField MembershipField::unchecked(std::vector<ImageGrid> grids) {
  MembershipField u;
  u.grids_ = std::move(grids);
  return u;
}

MembershipField::MembershipField(std::vector<ImageGrid> grids) : grids_(std::move(grids)) {
  if (grids_.size() < 2) {
    throw std::invalid_argument("MembershipField: need at least 2 phases");
  }
  for (const auto& g : grids_) {
    if (!g.same_shape(grids_.front()) || g.empty()) {
      throw std::invalid_argument("MembershipField: phase grids differ in shape");
    }
  }
  if (!feasible()) {
    throw std::invalid_argument("MembershipField: memberships are not on the simplex");
  }
}

double MembershipField::max_sum_violation() const {
  if (grids_.empty()) return 0.0;
  const std::size_t n = grids_.front().size();
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (const auto& g : grids_) s += g[x];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double MembershipField::max_bound_violation() const {
  double worst = 0.0;
  for (const auto& g : grids_) {
    for (double v : g.values()) {
      if (!std::isfinite(v)) return INFINITY;
      worst = std::max({worst, -v, v - 1.0});
    }
  }
  return worst;
}

bool MembershipField::feasible(double tol) const {
  return max_sum_violation() <= tol && max_bound_violation() <= 0.0;
}

ImageGrid normalize(const ImageGrid& img) {
  if (img.empty()) throw std::invalid_argument("normalize: empty image");
  const auto [lo, hi] = std::minmax_element(img.values().begin(), img.values().end());
  const double min = *lo;
  const double range = *hi - min;
  ImageGrid out(img.rows(), img.cols());
  if (range == 0.0) return out;
  for (std::size_t k = 0; k < img.size(); ++k) out[k] = (img[k] - min) / range;
  return out;
}

ImageGrid add_gaussian_noise(const ImageGrid& img, const NoiseSpec& spec) {
  if (!(spec.variance >= 0.0)) {
    throw std::invalid_argument("add_gaussian_noise: variance must be nonnegative");
  }
  ImageGrid out = img;
  // std::normal_distribution requires a positive standard deviation.
  if (spec.variance == 0.0) {
    for (double& v : out.values()) v += spec.mean;
    return out;
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(spec.mean, std::sqrt(spec.variance));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += normal(rng);
  return out;
}

LabelMask to_label_mask(const MembershipField& u) {
  const std::size_t n = u.rows() * u.cols();
  std::vector<std::uint32_t> labels(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    double best = u[0][x];
    for (std::size_t k = 1; k < u.phases(); ++k) {
      if (u[k][x] > best) {
        best = u[k][x];
        labels[x] = static_cast<std::uint32_t>(k);
      }
    }
  }
  return LabelMask(u.rows(), u.cols(), std::move(labels));
}

MembershipField ground_truth_to_membership(const LabelMask& mask, std::size_t phases) {
  if (phases < 2) throw std::invalid_argument("ground_truth_to_membership: need N >= 2");
  if (mask.label_bound() > phases) {
    throw std::invalid_argument("ground_truth_to_membership: label out of range for " +
                                std::to_string(phases) + " phases");
  }
  std::vector<ImageGrid> grids(phases, ImageGrid(mask.rows(), mask.cols()));
  for (std::size_t x = 0; x < mask.size(); ++x) grids[mask[x]][x] = 1.0;
  return MembershipField(std::move(grids));
}

}  // namespace ttvseg
