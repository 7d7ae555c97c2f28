// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/los.hpp"

#include <algorithm>

#include "radiogrid/error.hpp"
#include "radiogrid/log.hpp"
#include "radiogrid/parallel.hpp"

namespace radiogrid::los {
namespace {

bool facing(const Point3& tx, const WallSegment& w) noexcept {
  const geometry::Vec2 mid = w.midpoint();
  return w.outward_normal.x * (tx.x - mid.x) +
             w.outward_normal.y * (tx.y - mid.y) >
         0.0;
}

// Slack for the conservative block tests, in meters.
constexpr double kCullMargin = 1e-6;

struct Block {
  std::size_t begin = 0;
  std::size_t end = 0;
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  double max_z = 0;
};

Block bound_block(std::span<const Point3> rx, std::size_t begin, std::size_t end) {
  Block b{begin, end, rx[begin].x, rx[begin].y, rx[begin].x, rx[begin].y, rx[begin].z};
  for (std::size_t n = begin + 1; n < end; ++n) {
    b.min_x = std::min(b.min_x, rx[n].x);
    b.min_y = std::min(b.min_y, rx[n].y);
    b.max_x = std::max(b.max_x, rx[n].x);
    b.max_y = std::max(b.max_y, rx[n].y);
    b.max_z = std::max(b.max_z, rx[n].z);
  }
  b.min_x -= kCullMargin;
  b.min_y -= kCullMargin;
  b.max_x += kCullMargin;
  b.max_y += kCullMargin;
  return b;
}

// Convex hull (CCW) of tx and the block corners; every tx-receiver ray of
// the block lies inside it.
std::vector<geometry::Vec2> ray_hull(const Point3& tx, const Block& b) {
  std::vector<geometry::Vec2> pts{{tx.x, tx.y},
                                  {b.min_x, b.min_y},
                                  {b.max_x, b.min_y},
                                  {b.max_x, b.max_y},
                                  {b.min_x, b.max_y}};
  std::sort(pts.begin(), pts.end(), [](geometry::Vec2 a, geometry::Vec2 c) {
    return a.x < c.x || (a.x == c.x && a.y < c.y);
  });
  std::vector<geometry::Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && geometry::cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && geometry::cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Separating-axis test between a wall segment and a convex CCW polygon,
// requiring a gap wider than the margin before declaring them disjoint.
bool may_touch(const std::vector<geometry::Vec2>& hull, geometry::Vec2 a,
               geometry::Vec2 c) noexcept {
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const geometry::Vec2 p = hull[i];
    const geometry::Vec2 e = hull[(i + 1) % n] - p;
    const double len = geometry::norm(e);
    if (len == 0.0) continue;
    const geometry::Vec2 out{e.y / len, -e.x / len};
    if (geometry::dot(out, a - p) > kCullMargin && geometry::dot(out, c - p) > kCullMargin) {
      return false;
    }
  }
  const geometry::Vec2 d = c - a;
  const double len = geometry::norm(d);
  if (len == 0.0) return true;
  const geometry::Vec2 m{-d.y / len, d.x / len};
  bool all_above = true;
  bool all_below = true;
  for (const geometry::Vec2& p : hull) {
    const double side = geometry::dot(m, p - a);
    all_above = all_above && side > kCullMargin;
    all_below = all_below && side < -kCullMargin;
  }
  return !(all_above || all_below);
}

// A descending ray clears a wall of height h until the fraction
// t = (tz - h) / (tz - rz) of its length; the wall must lie beyond that.
bool may_reach_height(const Point3& tx, const Block& b, const WallSegment& w) noexcept {
  if (!(tx.z > w.height) || !(b.max_z < tx.z)) return true;
  const double t_min = (tx.z - w.height) / (tx.z - b.max_z);
  const double dx = std::max({b.min_x - tx.x, 0.0, tx.x - b.max_x});
  const double dy = std::max({b.min_y - tx.y, 0.0, tx.y - b.max_y});
  const double block_near = std::hypot(dx, dy);
  const double wall_far = std::max(std::hypot(w.p1.x - tx.x, w.p1.y - tx.y),
                                   std::hypot(w.p2.x - tx.x, w.p2.y - tx.y));
  return wall_far + kCullMargin >= t_min * block_near * (1.0 - 1e-9);
}

}  // namespace

std::vector<std::uint8_t> VisibilityMatrix::reduce() const {
  std::vector<std::uint8_t> mask(n_receivers_, 1);
  for (std::size_t n = 0; n < n_receivers_; ++n) {
    const auto row = bits_.begin() + static_cast<std::ptrdiff_t>(n * n_walls_);
    if (std::any_of(row, row + static_cast<std::ptrdiff_t>(n_walls_),
                    [](std::uint8_t b) { return b != 0; })) {
      mask[n] = 0;
    }
  }
  return mask;
}

std::vector<std::uint8_t> facing_walls(const Point3& tx,
                                       std::span<const WallSegment> walls) {
  std::vector<std::uint8_t> out(walls.size());
  for (std::size_t m = 0; m < walls.size(); ++m) {
    out[m] = facing(tx, walls[m]) ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> ray_wall_intersections(const Point3& tx,
                                                 std::span<const Point3> receivers,
                                                 const WallSegment& wall) {
  const WallPlane plane = WallPlane::from(wall);
  std::vector<std::uint8_t> hits(receivers.size());
  for (std::size_t n = 0; n < receivers.size(); ++n) {
    const Point3& r = receivers[n];
    hits[n] = segment_hits_wall(tx.x, tx.y, tx.z, r.x, r.y, r.z, plane) ? 1 : 0;
  }
  return hits;
}

std::vector<std::uint8_t> occluder_candidates(const Point3& tx,
                                              const Environment& env) {
  const auto walls = env.walls();
  const auto buildings = env.buildings();
  std::vector<std::uint8_t> tx_inside(buildings.size(), 0);
  for (std::size_t b = 0; b < buildings.size(); ++b) {
    tx_inside[b] = env.building_bbox(b).contains(tx.xy()) &&
                   geometry::point_in_footprint(tx.xy(), buildings[b].footprint);
  }
  std::vector<std::uint8_t> keep(walls.size());
  for (std::size_t m = 0; m < walls.size(); ++m) {
    const WallSegment& w = walls[m];
    const bool owned = w.building != geometry::kNoBuilding;
    keep[m] = facing(tx, w) || !owned || tx.z > w.height || tx_inside[w.building];
  }
  return keep;
}

std::vector<std::uint8_t> compute_los(const Point3& tx,
                                      std::span<const Point3> receivers,
                                      std::span<const WallSegment> walls,
                                      std::span<const std::uint8_t> candidates,
                                      const LosOptions& options) {
  if (candidates.size() != walls.size()) {
    throw GeometryError("compute_los: candidate flags do not match wall count");
  }
  std::vector<std::size_t> kept;
  std::vector<WallPlane> planes;
  for (std::size_t m = 0; m < walls.size(); ++m) {
    if (candidates[m]) {
      kept.push_back(m);
      planes.push_back(WallPlane::from(walls[m]));
    }
  }
  std::vector<std::uint8_t> mask(receivers.size(), 1);
  // Each block keeps the walls that some of its rays could reach, then
  // tests receivers against that short list with an early exit.
  constexpr std::size_t kBlock = 256;
  const std::size_t n_blocks = (receivers.size() + kBlock - 1) / kBlock;
  parallel_for(n_blocks, options.threads, [&](std::size_t b0, std::size_t b1) {
    std::vector<const WallPlane*> local;
    for (std::size_t bi = b0; bi < b1; ++bi) {
      const Block b = bound_block(receivers, bi * kBlock,
                                  std::min(receivers.size(), (bi + 1) * kBlock));
      const auto hull = ray_hull(tx, b);
      local.clear();
      for (std::size_t k = 0; k < kept.size(); ++k) {
        const WallSegment& w = walls[kept[k]];
        if (may_reach_height(tx, b, w) && may_touch(hull, w.p1, w.p2)) {
          local.push_back(&planes[k]);
        }
      }
      for (std::size_t n = b.begin; n < b.end; ++n) {
        const Point3& r = receivers[n];
        for (const WallPlane* plane : local) {
          if (segment_hits_wall(tx.x, tx.y, tx.z, r.x, r.y, r.z, *plane)) {
            mask[n] = 0;
            break;
          }
        }
      }
    }
  });
  return mask;
}

FeatureGrid compute_los_mask(const Point3& tx, const ReceiverGridSpec& grid,
                             const Environment& env, const LosOptions& options,
                             LosStats* stats) {
  grid.validate();
  const std::size_t inside = geometry::building_containing(tx.xy(), env);
  if (inside != geometry::kNoBuilding && tx.z <= env.buildings()[inside].height) {
    log().warn("transmitter ({}, {}, {}) is inside building #{} of '{}' below its "
               "roof; LOS mask will be mostly 0",
               tx.x, tx.y, tx.z, inside, env.name());
  }
  const auto receivers = geometry::grid_points(grid);
  const auto candidates = occluder_candidates(tx, env);
  if (stats != nullptr) {
    const auto f = facing_walls(tx, env.walls());
    stats->walls = env.walls().size();
    stats->facing = static_cast<std::size_t>(std::count(f.begin(), f.end(), 1));
    stats->tested =
        static_cast<std::size_t>(std::count(candidates.begin(), candidates.end(), 1));
    stats->receivers = receivers.size();
  }
  // Receivers are visited in 16x16 tiles so each block is spatially compact.
  constexpr std::size_t kTile = 16;
  std::vector<std::size_t> order;
  order.reserve(receivers.size());
  for (std::size_t r0 = 0; r0 < grid.rows; r0 += kTile) {
    for (std::size_t c0 = 0; c0 < grid.cols; c0 += kTile) {
      for (std::size_t r = r0; r < std::min(grid.rows, r0 + kTile); ++r) {
        for (std::size_t c = c0; c < std::min(grid.cols, c0 + kTile); ++c) {
          order.push_back(r * grid.cols + c);
        }
      }
    }
  }
  std::vector<Point3> tiled(receivers.size());
  for (std::size_t i = 0; i < order.size(); ++i) tiled[i] = receivers[order[i]];
  const auto mask = compute_los(tx, tiled, env.walls(), candidates, options);
  std::vector<double> values(receivers.size());
  for (std::size_t i = 0; i < order.size(); ++i) values[order[i]] = mask[i];
  return FeatureGrid(grid.rows, grid.cols, GridKind::kLosMask, std::move(values));
}

VisibilityMatrix visibility_matrix(const Point3& tx,
                                   std::span<const Point3> receivers,
                                   std::span<const WallSegment> walls) {
  VisibilityMatrix v(receivers.size(), walls.size());
  const auto f = facing_walls(tx, walls);
  for (std::size_t m = 0; m < walls.size(); ++m) {
    if (!f[m]) continue;
    const auto hits = ray_wall_intersections(tx, receivers, walls[m]);
    for (std::size_t n = 0; n < receivers.size(); ++n) {
      if (hits[n]) v.set(n, m);
    }
  }
  return v;
}

std::vector<std::uint8_t> brute_force_los(const Point3& tx,
                                          std::span<const Point3> receivers,
                                          std::span<const WallSegment> walls) {
  std::vector<WallPlane> planes;
  planes.reserve(walls.size());
  for (const WallSegment& w : walls) planes.push_back(WallPlane::from(w));
  std::vector<std::uint8_t> mask(receivers.size(), 1);
  for (std::size_t n = 0; n < receivers.size(); ++n) {
    const Point3& r = receivers[n];
    for (const WallPlane& plane : planes) {
      if (segment_hits_wall(tx.x, tx.y, tx.z, r.x, r.y, r.z, plane)) {
        mask[n] = 0;
        break;
      }
    }
  }
  return mask;
}

std::vector<std::uint8_t> brute_force_los(const Point3& tx,
                                          std::span<const Point3> receivers,
                                          const Environment& env) {
  return brute_force_los(tx, receivers, env.walls());
}

FeatureGrid brute_force_los_mask(const Point3& tx, const ReceiverGridSpec& grid,
                                 const Environment& env) {
  const auto receivers = geometry::grid_points(grid);
  const auto mask = brute_force_los(tx, receivers, env);
  return FeatureGrid(grid.rows, grid.cols, GridKind::kLosMask,
                     std::vector<double>(mask.begin(), mask.end()));
}

}  // namespace radiogrid::los
