// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "radiogrid/feature_grid.hpp"

namespace radiogrid::dataset {

inline constexpr std::size_t kPatchSize = 128;

enum class Flip { kNone, kHorizontal, kVertical };
std::string_view to_string(Flip flip) noexcept;
Flip flip_from_string(std::string_view name);

/// Strided 128x128 sampling window: out(r, c) = g(row0 + r * row_stride,
/// col0 + c * col_stride), followed by an optional flip.
struct PatchSpec {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t row_stride = 1;
  std::size_t col_stride = 1;
  std::size_t size = kPatchSize;
  Flip flip = Flip::kNone;

  bool fits(std::size_t rows, std::size_t cols) const noexcept {
    return row_stride >= 1 && col_stride >= 1 && size >= 1 &&
           row0 + (size - 1) * row_stride < rows &&
           col0 + (size - 1) * col_stride < cols;
  }

  /// Duplicate detection key; flips are not part of a patch's identity.
  auto identity() const noexcept {
    return std::tuple(row0, col0, row_stride, col_stride);
  }

  friend bool operator==(const PatchSpec&, const PatchSpec&) = default;
};

/// The 18 deterministic windows over a 256x384 grid:
///   6  stride (1,1) tiles at rows {0,128} x cols {0,128,256}
///   3  row stride 2 at cols {0,128,256}
///   2  col stride 2 from col 0, rows {0,128}
///   2  col stride 2 from col 1, rows {0,128}
///   2  row stride 2 x col stride 2, from col 0 and col 1
///   2  col stride 3, rows {0,128}
///   1  row stride 2 x col stride 3
/// Any other grid shape is rejected.
std::vector<PatchSpec> structured_patches(std::size_t rows = 256,
                                          std::size_t cols = 384);

/// `count` distinct in-bounds windows with per-axis strides drawn from the
/// feasible part of {1, 2, 3} and uniform origins. Identities already in
/// `exclude` (normally the structured set) are redrawn.
std::vector<PatchSpec> random_patches(std::size_t rows, std::size_t cols,
                                      std::size_t count, std::uint64_t seed,
                                      std::span<const PatchSpec> exclude = {});

FeatureGrid extract_patch(const FeatureGrid& g, const PatchSpec& spec);

/// Horizontal reverses columns, vertical reverses rows.
FeatureGrid apply_flip(const FeatureGrid& g, Flip flip);

/// Top-left, top-right, bottom-left, bottom-right of a 256x256 grid.
std::array<FeatureGrid, 4> quadrant_split(const FeatureGrid& g);

/// The four quadrant windows of a 256x256 grid as patch specs.
std::vector<PatchSpec> quadrant_patches();

/// One model input/target pair.
struct Sample {
  std::string id;
  std::string scenario;
  PatchSpec spec;
  std::vector<FeatureGrid> channels;  // log-distance, LOS, building
  FeatureGrid target;                 // normalized pathloss

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Patch every channel and the target with the same window.
Sample make_sample(std::string id, std::string scenario,
                   std::span<const FeatureGrid> channels, const FeatureGrid& target,
                   const PatchSpec& spec);

/// Original, horizontally flipped and vertically flipped copy of each
/// sample, in that order. Inputs must be unflipped.
std::vector<Sample> augment(std::span<const Sample> samples);

std::string sample_id(std::string_view scenario, std::size_t patch_index, Flip flip);

enum class SplitMode { kPerTransmitter, kCrossCity };
std::string_view to_string(SplitMode mode) noexcept;
SplitMode split_mode_from_string(std::string_view name);

struct ScenarioKey {
  std::string id;
  std::string city;
  std::size_t transmitter = 0;
};

struct SplitAssignment {
  SplitMode mode = SplitMode::kPerTransmitter;
  std::vector<std::string> train;
  std::vector<std::string> test;

  /// Test = every scenario whose transmitter index is listed (all altitudes).
  static SplitAssignment per_transmitter(std::span<const ScenarioKey> scenarios,
                                         std::span<const std::size_t> test_transmitters);
  /// Test = every scenario of the held-out city.
  static SplitAssignment cross_city(std::span<const ScenarioKey> scenarios,
                                    std::string_view holdout_city);

  bool is_test(std::string_view scenario) const noexcept;

  /// Disjoint, and together exactly the given scenario ids.
  void validate(std::span<const std::string> all_ids) const;
};

}  // namespace radiogrid::dataset
