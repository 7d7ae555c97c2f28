// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "radiogrid/feature_grid.hpp"

namespace radiogrid::npy {

/// NPY v1.0 image of a grid: '<f4', C order, shape (rows, cols).
std::vector<std::uint8_t> encode(const FeatureGrid& g);

/// Accepts '<f4' or '<f8', C order, 1-D (read as 1 x n) or 2-D.
FeatureGrid decode(std::span<const std::uint8_t> bytes, GridKind kind,
                   std::string_view name = "npy");

void save(const std::filesystem::path& path, const FeatureGrid& g);
FeatureGrid load(const std::filesystem::path& path, GridKind kind);

}  // namespace radiogrid::npy
