// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "radiogrid/feature_grid.hpp"
#include "radiogrid/geometry.hpp"

namespace radiogrid::los {

using geometry::Environment;
using geometry::Point3;
using geometry::ReceiverGridSpec;
using geometry::WallSegment;

/// Rays whose plane-equation denominator falls below this are treated as
/// parallel to the wall and never blocked.
inline constexpr double kParallelTolerance = 1e-12;

/// Wall constants shared by the bulk and scalar paths. Both paths evaluate
/// the same expressions on the same constants, so their results agree bit
/// for bit.
struct WallPlane {
  double nx, ny;        // outward normal
  double offset;        // n . p1
  double p1x, p1y;
  double dx, dy;        // p2 - p1
  double inv_len2;      // 1 / |p2 - p1|^2
  double height;

  static WallPlane from(const WallSegment& w) noexcept {
    const double dx = w.p2.x - w.p1.x;
    const double dy = w.p2.y - w.p1.y;
    return {w.outward_normal.x,
            w.outward_normal.y,
            w.outward_normal.x * w.p1.x + w.outward_normal.y * w.p1.y,
            w.p1.x,
            w.p1.y,
            dx,
            dy,
            1.0 / (dx * dx + dy * dy),
            w.height};
  }
};

/// Does the open segment tx -> rx pass through the wall rectangle?
///
/// The crossing parameter t must lie in (0, 1), the 2D crossing point on
/// the closed wall segment, and the crossing height in [0, height].
/// Branch-free.
inline bool segment_hits_wall(double tx, double ty, double tz, double rx,
                              double ry, double rz,
                              const WallPlane& w) noexcept {
  const double ux = rx - tx;
  const double uy = ry - ty;
  const double denom = w.nx * ux + w.ny * uy;
  const double t = (w.offset - (w.nx * tx + w.ny * ty)) / denom;
  const double qx = tx + t * ux;
  const double qy = ty + t * uy;
  const double s = ((qx - w.p1x) * w.dx + (qy - w.p1y) * w.dy) * w.inv_len2;
  const double z = tz + t * (rz - tz);
  return (std::fabs(denom) >= kParallelTolerance) & (t > 0.0) & (t < 1.0) &
         (s >= 0.0) & (s <= 1.0) & (z >= 0.0) & (z <= w.height);
}

/// N x M record of which rays cross which walls, receiver-major.
class VisibilityMatrix {
 public:
  VisibilityMatrix(std::size_t n_receivers, std::size_t n_walls)
      : n_receivers_(n_receivers), n_walls_(n_walls),
        bits_(n_receivers * n_walls, 0) {}

  std::size_t n_receivers() const noexcept { return n_receivers_; }
  std::size_t n_walls() const noexcept { return n_walls_; }
  bool get(std::size_t n, std::size_t m) const { return bits_[n * n_walls_ + m] != 0; }
  void set(std::size_t n, std::size_t m) { bits_[n * n_walls_ + m] = 1; }

  /// LOS label per receiver: 1 iff its row sums to zero.
  std::vector<std::uint8_t> reduce() const;

 private:
  std::size_t n_receivers_;
  std::size_t n_walls_;
  std::vector<std::uint8_t> bits_;
};

/// Entry m is 1 iff outward_normal_m . (tx_xy - midpoint_m) > 0.
std::vector<std::uint8_t> facing_walls(const Point3& tx,
                                       std::span<const WallSegment> walls);

/// Entry n is 1 iff the ray tx -> receivers[n] crosses `wall`.
std::vector<std::uint8_t> ray_wall_intersections(const Point3& tx,
                                                 std::span<const Point3> receivers,
                                                 const WallSegment& wall);

/// Walls that can block some ray from tx. A wall is kept when it faces tx,
/// or tx is above its top edge (a ray may then cross the roof and leave
/// through a back wall), or tx stands inside its building, or it has no
/// owning building. Back walls of buildings at least as tall as tx cannot
/// be the only blocker of any ray, so dropping them leaves the mask
/// unchanged.
std::vector<std::uint8_t> occluder_candidates(const Point3& tx,
                                              const Environment& env);

struct LosOptions {
  unsigned threads = 1;  // 0 = available parallelism
};

struct LosStats {
  std::size_t walls = 0;
  std::size_t facing = 0;
  std::size_t tested = 0;
  std::size_t receivers = 0;
};

/// Receiver-list form. Receivers are processed in blocks of consecutive
/// entries; a flagged wall is tested against a block only when its segment
/// meets the hull of tx and the block and its top edge can still be below
/// some ray of the block. `candidates` has one entry per wall. Spatially
/// compact receiver orderings make the block tests effective.
std::vector<std::uint8_t> compute_los(const Point3& tx,
                                      std::span<const Point3> receivers,
                                      std::span<const WallSegment> walls,
                                      std::span<const std::uint8_t> candidates,
                                      const LosOptions& options = {});

/// LOS mask over a receiver grid (1 = line of sight). Warns when tx is
/// inside a building below its roof and proceeds.
FeatureGrid compute_los_mask(const Point3& tx, const ReceiverGridSpec& grid,
                             const Environment& env,
                             const LosOptions& options = {},
                             LosStats* stats = nullptr);

/// Materializes the facing-wall visibility matrix for small problems; the
/// reduction of the result equals compute_los over facing walls only.
VisibilityMatrix visibility_matrix(const Point3& tx,
                                   std::span<const Point3> receivers,
                                   std::span<const WallSegment> walls);

/// Reference path: per receiver, every wall, scalar, no filtering.
std::vector<std::uint8_t> brute_force_los(const Point3& tx,
                                          std::span<const Point3> receivers,
                                          std::span<const WallSegment> walls);
std::vector<std::uint8_t> brute_force_los(const Point3& tx,
                                          std::span<const Point3> receivers,
                                          const Environment& env);
FeatureGrid brute_force_los_mask(const Point3& tx, const ReceiverGridSpec& grid,
                                 const Environment& env);

}  // namespace radiogrid::los
