// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "radiogrid/error.hpp"

namespace radiogrid::geometry {
namespace {

std::string building_label(const Building& b, std::size_t index) {
  if (!b.name.empty()) return "building '" + b.name + "'";
  if (index != kNoBuilding) return "building #" + std::to_string(index);
  return "building";
}

int orientation(Vec2 a, Vec2 b, Vec2 c) noexcept {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) noexcept {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection, including touching and collinear overlap.
bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d) noexcept {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

Box2 footprint_box(std::span<const Vec2> polygon) noexcept {
  Box2 box{polygon[0].x, polygon[0].y, polygon[0].x, polygon[0].y};
  for (const Vec2& p : polygon) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

}  // namespace

double signed_area2(std::span<const Vec2> polygon) noexcept {
  double sum = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    sum += cross(polygon[i], polygon[(i + 1) % n]);
  }
  return sum;
}

void validate_building(const Building& building, std::size_t index) {
  const auto& fp = building.footprint;
  const std::string label = building_label(building, index);
  if (fp.size() < 3) {
    throw GeometryError(label + ": footprint needs at least 3 vertices, got " +
                        std::to_string(fp.size()));
  }
  if (!std::isfinite(building.height) || building.height <= 0.0) {
    throw GeometryError(label + ": height must be finite and > 0");
  }
  for (std::size_t i = 0; i < fp.size(); ++i) {
    if (!std::isfinite(fp[i].x) || !std::isfinite(fp[i].y)) {
      throw GeometryError(label + ": non-finite vertex " + std::to_string(i));
    }
  }
  const std::size_t n = fp.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (norm(fp[(i + 1) % n] - fp[i]) < kMinEdgeLength) {
      throw GeometryError(label + ": degenerate edge " + std::to_string(i) +
                          " (length below 1e-9 m)");
    }
  }
  if (signed_area2(fp) == 0.0) {
    throw GeometryError(label + ": footprint has zero area");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = fp[i];
    const Vec2 b = fp[(i + 1) % n];
    // Adjacent edges may only share their common vertex.
    const Vec2 c = fp[(i + 2) % n];
    if (cross(b - a, c - b) == 0.0 && dot(b - a, c - b) < 0.0) {
      throw GeometryError(label + ": footprint folds back on itself at vertex " +
                          std::to_string((i + 1) % n));
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      if (segments_touch(a, b, fp[j], fp[(j + 1) % n])) {
        throw GeometryError(label + ": footprint is not simple (edges " +
                            std::to_string(i) + " and " + std::to_string(j) +
                            " intersect)");
      }
    }
  }
}

Building normalize_orientation(Building building) {
  if (signed_area2(building.footprint) < 0.0) {
    std::reverse(building.footprint.begin(), building.footprint.end());
  }
  return building;
}

WallSegment WallSegment::from_endpoints(Vec2 p1, Vec2 p2, double height,
                                        std::size_t building) {
  if (!std::isfinite(p1.x) || !std::isfinite(p1.y) || !std::isfinite(p2.x) ||
      !std::isfinite(p2.y) || !std::isfinite(height)) {
    throw GeometryError("wall has non-finite coordinates");
  }
  const Vec2 d = p2 - p1;
  const double len = norm(d);
  if (len < kMinEdgeLength) {
    throw GeometryError("wall endpoints coincide (length below 1e-9 m)");
  }
  WallSegment w;
  w.p1 = p1;
  w.p2 = p2;
  w.height = height;
  w.outward_normal = {d.y / len, -d.x / len};
  w.building = building;
  return w;
}

std::vector<WallSegment> derive_walls(const Building& building,
                                      std::size_t building_index) {
  validate_building(building, building_index);
  const Building ccw = normalize_orientation(building);
  const auto& fp = ccw.footprint;
  std::vector<WallSegment> walls;
  walls.reserve(fp.size());
  for (std::size_t i = 0; i < fp.size(); ++i) {
    walls.push_back(WallSegment::from_endpoints(fp[i], fp[(i + 1) % fp.size()],
                                                ccw.height, building_index));
  }
  return walls;
}

Environment::Environment(std::string name, std::vector<Building> buildings)
    : name_(std::move(name)) {
  buildings_.reserve(buildings.size());
  for (std::size_t i = 0; i < buildings.size(); ++i) {
    auto walls = derive_walls(buildings[i], i);
    walls_.insert(walls_.end(), walls.begin(), walls.end());
    buildings_.push_back(normalize_orientation(std::move(buildings[i])));
    building_boxes_.push_back(footprint_box(buildings_.back().footprint));
  }
  if (!building_boxes_.empty()) {
    bbox_ = building_boxes_.front();
    for (const Box2& b : building_boxes_) {
      bbox_.min_x = std::min(bbox_.min_x, b.min_x);
      bbox_.min_y = std::min(bbox_.min_y, b.min_y);
      bbox_.max_x = std::max(bbox_.max_x, b.max_x);
      bbox_.max_y = std::max(bbox_.max_y, b.max_y);
    }
  }
}

void ReceiverGridSpec::validate() const {
  if (rows < 1 || cols < 1) {
    throw GeometryError("receiver grid needs at least one row and column");
  }
  if (!(spacing_x > 0.0) || !(spacing_y > 0.0) || !std::isfinite(spacing_x) ||
      !std::isfinite(spacing_y)) {
    throw GeometryError("receiver grid spacing must be finite and > 0");
  }
  if (!(rx_height > 0.0) || !std::isfinite(rx_height)) {
    throw GeometryError("receiver height must be finite and > 0");
  }
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) {
    throw GeometryError("receiver grid origin must be finite");
  }
}

std::vector<Point3> grid_points(const ReceiverGridSpec& spec) {
  spec.validate();
  std::vector<Point3> points;
  points.reserve(spec.size());
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      points.push_back(spec.point(r, c));
    }
  }
  return points;
}

void TransmitterScenario::validate() const {
  grid.validate();
  if (!std::isfinite(tx.x) || !std::isfinite(tx.y) || !std::isfinite(tx.z)) {
    throw GeometryError("scenario '" + id + "': transmitter position must be finite");
  }
  if (!(carrier_frequency_ghz > 0.0)) {
    throw GeometryError("scenario '" + id + "': carrier frequency must be > 0");
  }
  if (!(tx.z > grid.rx_height)) {
    throw GeometryError("scenario '" + id +
                        "': transmitter altitude must exceed receiver height");
  }
}

bool point_in_footprint(Vec2 p, std::span<const Vec2> polygon) noexcept {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

std::size_t building_containing(Vec2 p, const Environment& env) noexcept {
  const auto buildings = env.buildings();
  for (std::size_t i = 0; i < buildings.size(); ++i) {
    if (!env.building_bbox(i).contains(p)) continue;
    if (point_in_footprint(p, buildings[i].footprint)) return i;
  }
  return kNoBuilding;
}

bool point_in_building(Vec2 p, const Environment& env) noexcept {
  return building_containing(p, env) != kNoBuilding;
}

Environment parse_environment_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(std::string("environment JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("buildings") ||
      !doc["buildings"].is_array()) {
    throw GeometryError("environment JSON: expected object with 'buildings' array");
  }
  const std::string name = doc.value("name", std::string{});
  auto number = [](const nlohmann::json& v, const std::string& what) {
    if (!v.is_number()) throw GeometryError("environment JSON: " + what + " is not a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw GeometryError("environment JSON: " + what + " is not finite");
    return d;
  };
  std::vector<Building> buildings;
  for (std::size_t i = 0; i < doc["buildings"].size(); ++i) {
    const auto& jb = doc["buildings"][i];
    const std::string where = "building #" + std::to_string(i);
    if (!jb.is_object() || !jb.contains("footprint") || !jb["footprint"].is_array() ||
        !jb.contains("height")) {
      throw GeometryError("environment JSON: " + where +
                          " needs 'footprint' array and 'height'");
    }
    Building b;
    b.name = jb.value("name", std::string{});
    b.height = number(jb["height"], where + " height");
    for (const auto& v : jb["footprint"]) {
      if (!v.is_array() || v.size() != 2) {
        throw GeometryError("environment JSON: " + where + " vertex must be [x, y]");
      }
      b.footprint.push_back({number(v[0], where + " x"), number(v[1], where + " y")});
    }
    if (b.footprint.size() < 3) {
      throw GeometryError("environment JSON: " + where + " has fewer than 3 vertices");
    }
    buildings.push_back(std::move(b));
  }
  return Environment(name, std::move(buildings));
}

Environment load_environment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open environment file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_environment_json(buffer.str());
  } catch (const GeometryError& e) {
    throw GeometryError(path.string() + ": " + e.what());
  }
}

std::string environment_to_json(const Environment& env) {
  nlohmann::json doc;
  doc["name"] = env.name();
  doc["buildings"] = nlohmann::json::array();
  for (const Building& b : env.buildings()) {
    nlohmann::json jb;
    if (!b.name.empty()) jb["name"] = b.name;
    jb["height"] = b.height;
    jb["footprint"] = nlohmann::json::array();
    for (const Vec2& v : b.footprint) jb["footprint"].push_back({v.x, v.y});
    doc["buildings"].push_back(std::move(jb));
  }
  return doc.dump(1);
}

}  // namespace radiogrid::geometry
