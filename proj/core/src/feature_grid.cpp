// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/feature_grid.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "radiogrid/error.hpp"

namespace radiogrid {
namespace {

constexpr std::array<std::pair<GridKind, std::string_view>, 6> kKindNames{{
    {GridKind::kLogDistance, "log_distance"},
    {GridKind::kLosMask, "los_mask"},
    {GridKind::kBuildingMask, "building_mask"},
    {GridKind::kPathloss, "pathloss"},
    {GridKind::kNormalized, "normalized"},
    {GridKind::kDistance, "distance"},
}};

}  // namespace

std::string_view to_string(GridKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

GridKind grid_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw GridError("unknown grid kind '" + std::string(name) + "'");
}

FeatureGrid::FeatureGrid(std::size_t rows, std::size_t cols, GridKind kind,
                         double fill)
    : rows_(rows), cols_(cols), kind_(kind), values_(rows * cols, fill) {
  validate();
}

FeatureGrid::FeatureGrid(std::size_t rows, std::size_t cols, GridKind kind,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), kind_(kind), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw GridError("feature grid of shape " + std::to_string(rows_) + "x" +
                    std::to_string(cols_) + " given " +
                    std::to_string(values_.size()) + " values");
  }
  validate();
}

void FeatureGrid::validate() const {
  const bool mask = is_mask(kind_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) {
      throw GridError(std::string(to_string(kind_)) +
                      " grid has non-finite value at index " +
                      std::to_string(i));
    }
    if (mask && v != 0.0 && v != 1.0) {
      throw GridError(std::string(to_string(kind_)) +
                      " mask has non-binary value at index " +
                      std::to_string(i));
    }
  }
}

FeatureGrid FeatureGrid::relabeled(GridKind kind) const {
  FeatureGrid out = *this;
  out.kind_ = kind;
  out.validate();
  return out;
}

void require_same_shape(const FeatureGrid& a, const FeatureGrid& b,
                        std::string_view what) {
  if (!a.same_shape(b)) {
    throw GridError(std::string(what) + ": shape mismatch " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
  }
}

}  // namespace radiogrid
