#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ttvseg {

/// Dense m x n grid of doubles in row-major order. Holds the observed image
/// and every scalar field the solver works with.
class ImageGrid {
public:
  ImageGrid() = default;
  ImageGrid(std::size_t rows, std::size_t cols, double fill = 0.0);
  ImageGrid(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const ImageGrid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Hard segmentation: one phase index per pixel.
class LabelMask {
public:
  LabelMask() = default;
  LabelMask(std::size_t rows, std::size_t cols, std::vector<std::uint32_t> labels);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return labels_.size(); }
  std::uint32_t operator[](std::size_t k) const { return labels_[k]; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return labels_[i * cols_ + j]; }
  std::span<const std::uint32_t> labels() const { return labels_; }

  /// One past the largest label present (0 for an empty mask).
  std::uint32_t label_bound() const;

  bool same_shape(const LabelMask& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const LabelMask&, const LabelMask&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> labels_;
};

/// Tolerance on the per-pixel membership sum.
inline constexpr double kSimplexTolerance = 1e-9;

/// N >= 2 membership grids whose values lie on the probability simplex at
/// every pixel. The constructor validates; use `unchecked` only for data
/// that is feasible by construction (the output of a projection).
class MembershipField {
public:
  MembershipField() = default;
  explicit MembershipField(std::vector<ImageGrid> grids);

  static MembershipField unchecked(std::vector<ImageGrid> grids);

  std::size_t phases() const { return grids_.size(); }
  std::size_t rows() const { return grids_.empty() ? 0 : grids_.front().rows(); }
  std::size_t cols() const { return grids_.empty() ? 0 : grids_.front().cols(); }
  const ImageGrid& operator[](std::size_t k) const { return grids_[k]; }
  const std::vector<ImageGrid>& grids() const { return grids_; }

  /// Largest |sum_k u_k - 1| over all pixels.
  double max_sum_violation() const;
  /// Largest distance of any entry outside [0, 1].
  double max_bound_violation() const;
  bool feasible(double tol = kSimplexTolerance) const;

  friend bool operator==(const MembershipField&, const MembershipField&) = default;

private:
  std::vector<ImageGrid> grids_;
};

struct NoiseSpec {
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t seed = 0;
};

/// Affine map of the intensity range onto [0, 1]; constant images map to 0.
ImageGrid normalize(const ImageGrid& img);

/// Adds i.i.d. Normal(mean, variance) noise drawn from a std::mt19937_64
/// stream seeded with `spec.seed`, in row-major pixel order. No clipping.
ImageGrid add_gaussian_noise(const ImageGrid& img, const NoiseSpec& spec);

/// Per-pixel argmax; ties go to the smallest phase index.
LabelMask to_label_mask(const MembershipField& u);

MembershipField ground_truth_to_membership(const LabelMask& mask, std::size_t phases);

}  // namespace ttvseg
