// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "radiogrid/geometry.hpp"

namespace radiogrid::synthetic {

struct SceneOptions {
  std::size_t buildings = 20;
  geometry::Box2 extent{0.0, 0.0, 384.0, 256.0};
  double min_height = 8.0;
  double max_height = 35.0;
  double l_shape_fraction = 0.3;
  double clockwise_fraction = 0.25;  // footprints emitted clockwise
  double max_rotation_deg = 45.0;
  double fill = 0.6;  // footprint size relative to its cell
};

/// Non-overlapping rotated rectangles and L-shapes, one per cell of a
/// jittered lattice over the extent. Deterministic in (options, seed).
geometry::Environment generate_scene(const SceneOptions& options, std::uint64_t seed,
                                     std::string name = "synthetic");

/// A transmitter position in the extent that lies outside every footprint.
geometry::Point3 open_position(const geometry::Environment& env,
                               const geometry::Box2& extent, double altitude,
                               std::uint64_t seed);

}  // namespace radiogrid::synthetic
