// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace radiogrid {

enum class GridKind {
  kLogDistance,
  kLosMask,
  kBuildingMask,
  kPathloss,
  kNormalized,
  kDistance,  // raw 3D distance in meters, input to distance perturbation
};

constexpr bool is_mask(GridKind kind) noexcept {
  return kind == GridKind::kLosMask || kind == GridKind::kBuildingMask;
}

std::string_view to_string(GridKind kind) noexcept;
GridKind grid_kind_from_string(std::string_view name);

/// Row-major 2D raster aligned with a receiver grid. Index r * cols + c is
/// the canonical flattening used throughout the library.
///
/// Values are always finite; mask kinds hold only 0 and 1. Constructors
/// and validate() enforce this.
class FeatureGrid {
 public:
  FeatureGrid() = default;
  FeatureGrid(std::size_t rows, std::size_t cols, GridKind kind,
              double fill = 0.0);
  FeatureGrid(std::size_t rows, std::size_t cols, GridKind kind,
              std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  GridKind kind() const noexcept { return kind_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator()(std::size_t r, std::size_t c) const noexcept {
    return values_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) noexcept {
    return values_[r * cols_ + c];
  }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  bool same_shape(const FeatureGrid& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  /// Throws GridError on non-finite values or non-binary masks.
  void validate() const;

  /// Same values, different kind label. Re-validates.
  FeatureGrid relabeled(GridKind kind) const;

  friend bool operator==(const FeatureGrid&, const FeatureGrid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  GridKind kind_ = GridKind::kNormalized;
  std::vector<double> values_;
};

/// Throws GridError unless both grids share a shape; `what` names the caller.
void require_same_shape(const FeatureGrid& a, const FeatureGrid& b,
                        std::string_view what);

}  // namespace radiogrid
