// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "radiogrid/feature_grid.hpp"
#include "radiogrid/geometry.hpp"

namespace radiogrid::channels {

/// Raw 3D transmitter-receiver distance in meters (kind kDistance).
FeatureGrid distance_grid(const geometry::Point3& tx,
                          const geometry::ReceiverGridSpec& grid);

/// 20 log10(d) of a raw distance grid. Rejects d < 1e-6 m.
FeatureGrid log_distance_from_distance(const FeatureGrid& distance);

/// 20 log10(|tx - rx|) per receiver.
FeatureGrid log_distance_channel(const geometry::Point3& tx,
                                 const geometry::ReceiverGridSpec& grid);

/// 1 where the receiver lies inside a building footprint.
FeatureGrid building_mask_channel(const geometry::ReceiverGridSpec& grid,
                                  const geometry::Environment& env);

struct NormalizationStats {
  double min = 0.0;
  double max = 1.0;

  void validate() const;
  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

/// Min and max over every value of every grid (training split only).
NormalizationStats compute_stats(std::span<const FeatureGrid> grids);

struct Normalized {
  FeatureGrid grid;
  std::size_t out_of_range = 0;  // values outside [0, 1]
};

/// (v - min) / (max - min) for continuous kinds; masks pass through.
/// Values outside the training range are kept and counted.
Normalized normalize(const FeatureGrid& g, const NormalizationStats& stats);

/// Inverse of normalize. `restored` labels the output (e.g. kPathloss);
/// masks pass through unchanged.
FeatureGrid denormalize(const FeatureGrid& g, const NormalizationStats& stats,
                        GridKind restored);

inline constexpr double kNearFieldLimit = 300.0;  // meters
inline constexpr double kMinPerturbedDistance = 1e-3;

enum class DistanceRegime { kNear, kFar };

struct DistancePerturbation {
  FeatureGrid grid;                  // raw meters
  std::vector<std::size_t> changed;  // selected receiver indices, ascending
};

/// Picks floor(fraction * K) of the K receivers in the regime (near:
/// d < 300 m, far: d >= 300 m) without replacement and adds N(0, (sigma_pct
/// * d)^2) noise to each, clamping at 1e-3 m. Works on raw distances, before
/// the log transform. The selection is keyed by (seed, sigma_pct).
DistancePerturbation perturb_distance(const FeatureGrid& distance,
                                      DistanceRegime regime, double fraction,
                                      double sigma_pct, std::uint64_t seed);

/// floor(fraction * n) distinct indices in [0, n), ascending.
std::vector<std::size_t> flip_indices(std::size_t n, double fraction,
                                      std::uint64_t seed);

/// Complements exactly floor(fraction * N) distinct pixels of a mask.
FeatureGrid flip_mask(const FeatureGrid& mask, double fraction, std::uint64_t seed);

}  // namespace radiogrid::channels
