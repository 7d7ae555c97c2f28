// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radiogrid::geometry {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept {
    return {a.x + b.x, a.y + b.y};
  }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept {
    return {a.x - b.x, a.y - b.y};
  }
  friend constexpr Vec2 operator*(double s, Vec2 v) noexcept {
    return {s * v.x, s * v.y};
  }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept {
  return a.x * b.y - a.y * b.x;
}
inline double norm(Vec2 v) noexcept { return std::hypot(v.x, v.y); }

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec2 xy() const noexcept { return {x, y}; }
  friend constexpr bool operator==(Point3, Point3) = default;
};

inline double distance(const Point3& a, const Point3& b) noexcept {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

struct Box2 {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  constexpr bool contains(Vec2 p) const noexcept {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
};

/// Extruded footprint: flat roof at `height`, vertical walls, flat ground.
struct Building {
  std::string name;  // optional; used in diagnostics
  std::vector<Vec2> footprint;
  double height = 0.0;
};

/// Twice the signed area; positive for counter-clockwise polygons.
double signed_area2(std::span<const Vec2> polygon) noexcept;

/// Rejects fewer than 3 vertices, non-finite coordinates, non-positive
/// height, edges shorter than kMinEdgeLength, zero area and self-crossing
/// outlines. `index` is only used to label the diagnostic.
void validate_building(const Building& building,
                       std::size_t index = std::numeric_limits<std::size_t>::max());

/// Copy of the building with its footprint reordered counter-clockwise.
Building normalize_orientation(Building building);

inline constexpr double kMinEdgeLength = 1e-9;
inline constexpr std::size_t kNoBuilding = std::numeric_limits<std::size_t>::max();

/// Vertical wall rectangle standing on segment p1 -> p2 from z = 0 to
/// z = height. The outward normal is the right-hand perpendicular of
/// p2 - p1, which points away from the interior for CCW footprints.
struct WallSegment {
  Vec2 p1;
  Vec2 p2;
  double height = 0.0;
  Vec2 outward_normal;
  std::size_t building = kNoBuilding;  // owning building, if any

  /// Throws GeometryError for degenerate or non-finite input.
  static WallSegment from_endpoints(Vec2 p1, Vec2 p2, double height,
                                    std::size_t building = kNoBuilding);

  constexpr Vec2 midpoint() const noexcept {
    return {0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)};
  }
};

/// One wall per footprint edge, after normalizing to CCW order.
std::vector<WallSegment> derive_walls(const Building& building,
                                      std::size_t building_index = kNoBuilding);

/// Immutable urban scene. Buildings are stored CCW; walls are derived from
/// every footprint edge.
class Environment {
 public:
  Environment() = default;
  Environment(std::string name, std::vector<Building> buildings);

  const std::string& name() const noexcept { return name_; }
  std::span<const Building> buildings() const noexcept { return buildings_; }
  std::span<const WallSegment> walls() const noexcept { return walls_; }
  const Box2& bbox() const noexcept { return bbox_; }
  const Box2& building_bbox(std::size_t i) const { return building_boxes_.at(i); }

 private:
  std::string name_;
  std::vector<Building> buildings_;
  std::vector<WallSegment> walls_;
  std::vector<Box2> building_boxes_;
  Box2 bbox_;
};

struct ReceiverGridSpec {
  std::size_t rows = 256;
  std::size_t cols = 384;
  Vec2 origin;
  double spacing_x = 1.0;
  double spacing_y = 1.0;
  double rx_height = 1.5;

  void validate() const;
  std::size_t size() const noexcept { return rows * cols; }
  Point3 point(std::size_t r, std::size_t c) const noexcept {
    return {origin.x + static_cast<double>(c) * spacing_x,
            origin.y + static_cast<double>(r) * spacing_y, rx_height};
  }
};

/// Row-major receiver positions: index r * cols + c.
std::vector<Point3> grid_points(const ReceiverGridSpec& spec);

struct TransmitterScenario {
  std::string id;
  Point3 tx;
  double carrier_frequency_ghz = 28.0;
  double tx_power_dbm = 30.0;
  ReceiverGridSpec grid;
  std::string site;

  void validate() const;
};

/// Even-odd crossing test with the half-open edge rule: an edge counts when
/// exactly one endpoint lies strictly above p.y. Boundary points therefore
/// get a deterministic, tie-free answer.
bool point_in_footprint(Vec2 p, std::span<const Vec2> polygon) noexcept;

/// True if p falls inside any building footprint of the environment.
bool point_in_building(Vec2 p, const Environment& env) noexcept;

/// Index of the first building whose footprint contains p, or kNoBuilding.
std::size_t building_containing(Vec2 p, const Environment& env) noexcept;

/// Parses `{"name": str, "buildings": [{"footprint": [[x,y],...],
/// "height": h}, ...]}`. Throws GeometryError on NaN/Inf, short polygons
/// and any other invalid building.
Environment parse_environment_json(std::string_view text);
Environment load_environment(const std::filesystem::path& path);
std::string environment_to_json(const Environment& env);

}  // namespace radiogrid::geometry
