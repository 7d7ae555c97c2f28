// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "radiogrid/error.hpp"
#include "radiogrid/geometry.hpp"
#include "radiogrid/synthetic.hpp"
#include "test_support.hpp"

using namespace radiogrid;
using namespace radiogrid::geometry;
using radiogrid::testing::box;
using radiogrid::testing::winding_number;

namespace {

std::vector<Vec2> regular_polygon(std::size_t n, double radius, Vec2 center) {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    out.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return out;
}

Vec2 centroid(std::span<const Vec2> poly) {
  Vec2 c;
  for (Vec2 v : poly) c = c + v;
  return (1.0 / static_cast<double>(poly.size())) * c;
}

}  // namespace

TEST_CASE("unit square yields four walls with axis normals") {
  const auto walls = derive_walls(box(0, 0, 1, 1, 10));
  REQUIRE(walls.size() == 4);
  CHECK(walls[0].p1 == Vec2{0, 0});
  CHECK(walls[0].p2 == Vec2{1, 0});
  CHECK(walls[0].outward_normal.x == doctest::Approx(0.0));
  CHECK(walls[0].outward_normal.y == doctest::Approx(-1.0));
  for (const auto& w : walls) CHECK(w.height == 10.0);
}

TEST_CASE("triangle hypotenuse normal points away from the interior") {
  const auto walls = derive_walls({"tri", {{0, 0}, {2, 0}, {0, 2}}, 5});
  REQUIRE(walls.size() == 3);
  CHECK(walls[1].outward_normal.x == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(walls[1].outward_normal.y == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("clockwise input gives the same walls as counter-clockwise") {
  Building ccw = box(2, 3, 7, 9, 12);
  Building cw = ccw;
  std::reverse(cw.footprint.begin(), cw.footprint.end());
  CHECK(signed_area2(cw.footprint) < 0.0);
  CHECK(signed_area2(normalize_orientation(cw).footprint) > 0.0);

  auto key = [](const WallSegment& w) {
    Vec2 a = w.p1, b = w.p2;
    if (std::tie(b.x, b.y) < std::tie(a.x, a.y)) std::swap(a, b);
    return std::tuple(a.x, a.y, b.x, b.y, w.outward_normal.x, w.outward_normal.y);
  };
  auto wa = derive_walls(ccw);
  auto wb = derive_walls(cw);
  std::vector<decltype(key(wa[0]))> ka, kb;
  for (const auto& w : wa) ka.push_back(key(w));
  for (const auto& w : wb) kb.push_back(key(w));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  CHECK(ka == kb);
}

TEST_CASE("wall normals are unit length and perpendicular") {
  synthetic::SceneOptions opt;
  opt.buildings = 40;
  const Environment env = synthetic::generate_scene(opt, 11);
  for (const auto& w : env.walls()) {
    CHECK(std::abs(norm(w.outward_normal) - 1.0) <= 1e-12);
    CHECK(std::abs(dot(w.outward_normal, w.p2 - w.p1)) <= 1e-12 * norm(w.p2 - w.p1));
  }
}

TEST_CASE("convex footprint centroid lies behind every wall") {
  for (std::size_t n = 3; n <= 12; ++n) {
    Building b{"poly", regular_polygon(n, 5.0 + static_cast<double>(n), {10.0, -4.0}), 8.0};
    if (n % 2 == 1) std::reverse(b.footprint.begin(), b.footprint.end());
    const Vec2 c = centroid(normalize_orientation(b).footprint);
    for (const auto& w : derive_walls(b)) {
      CHECK(dot(w.outward_normal, c - w.midpoint()) < 0.0);
    }
  }
}

TEST_CASE("outward normals leave the footprint on non-convex buildings") {
  synthetic::SceneOptions opt;
  opt.buildings = 30;
  opt.l_shape_fraction = 1.0;
  const Environment env = synthetic::generate_scene(opt, 5);
  for (const auto& w : env.walls()) {
    const auto& fp = env.buildings()[w.building].footprint;
    const Vec2 m = w.midpoint();
    const double eps = 1e-3;
    CHECK(winding_number(m + eps * w.outward_normal, fp) == 0);
    CHECK(winding_number(m - eps * w.outward_normal, fp) != 0);
  }
}

TEST_CASE("invalid buildings are rejected with the building and edge named") {
  CHECK_THROWS_AS(validate_building({"a", {{0, 0}, {1, 0}}, 3}), GeometryError);
  CHECK_THROWS_AS(validate_building(box(0, 0, 1, 1, 0.0)), GeometryError);
  CHECK_THROWS_AS(validate_building(box(0, 0, 1, 1, -2.0)), GeometryError);
  CHECK_THROWS_AS(validate_building({"nan", {{0, 0}, {NAN, 0}, {0, 1}}, 3}), GeometryError);
  CHECK_THROWS_AS(validate_building({"flat", {{0, 0}, {1, 0}, {2, 0}}, 3}), GeometryError);
  CHECK_THROWS_AS(validate_building({"bow", {{0, 0}, {2, 2}, {2, 0}, {0, 2}}, 3}),
                  GeometryError);
  try {
    validate_building({"dup", {{0, 0}, {1, 0}, {1, 0}, {0, 1}}, 3}, 4);
    FAIL("degenerate edge accepted");
  } catch (const GeometryError& e) {
    const std::string what = e.what();
    CHECK(what.find("dup") != std::string::npos);
    CHECK(what.find("edge 1") != std::string::npos);
  }
  CHECK_THROWS_AS(WallSegment::from_endpoints({1, 1}, {1, 1}, 3), GeometryError);
}

TEST_CASE("grid points are row-major") {
  ReceiverGridSpec one{1, 1, {0, 0}, 1, 1, 1.5};
  REQUIRE(grid_points(one).size() == 1);
  CHECK(grid_points(one)[0] == Point3{0, 0, 1.5});

  ReceiverGridSpec g{2, 3, {0, 0}, 1, 1, 2.0};
  const auto pts = grid_points(g);
  REQUIRE(pts.size() == 6);
  CHECK(pts[4] == Point3{1, 1, 2.0});

  ReceiverGridSpec full;
  CHECK(grid_points(full).size() == 98'304);

  ReceiverGridSpec odd{7, 5, {-3.0, 2.0}, 0.5, 2.0, 1.5};
  const auto p = grid_points(odd);
  for (std::size_t r = 0; r < odd.rows; ++r) {
    for (std::size_t c = 0; c < odd.cols; ++c) {
      CHECK(p[r * odd.cols + c] == odd.point(r, c));
    }
  }
}

TEST_CASE("invalid grids and scenarios are rejected") {
  CHECK_THROWS_AS((ReceiverGridSpec{0, 3, {}, 1, 1, 1.5}.validate()), GeometryError);
  CHECK_THROWS_AS((ReceiverGridSpec{3, 3, {}, 0, 1, 1.5}.validate()), GeometryError);
  CHECK_THROWS_AS((ReceiverGridSpec{3, 3, {}, 1, 1, 0}.validate()), GeometryError);
  TransmitterScenario s;
  s.id = "low";
  s.tx = {0, 0, 1.0};
  s.grid = {4, 4, {}, 1, 1, 1.5};
  CHECK_THROWS_AS(s.validate(), GeometryError);
  s.tx.z = 25.0;
  CHECK_NOTHROW(s.validate());
  s.carrier_frequency_ghz = 0.0;
  CHECK_THROWS_AS(s.validate(), GeometryError);
}

TEST_CASE("point in building simple cases") {
  const Environment env("e", {box(0, 0, 1, 1, 5), box(3, 3, 5, 5, 5)});
  CHECK(point_in_building({0.5, 0.5}, env));
  CHECK(point_in_building({4, 4}, env));
  CHECK_FALSE(point_in_building({10, 10}, env));
  CHECK(building_containing({4, 4}, env) == 1);
  CHECK(building_containing({2, 2}, env) == kNoBuilding);
}

TEST_CASE("crossing test agrees with the winding-number oracle") {
  synthetic::SceneOptions opt;
  opt.buildings = 12;
  opt.extent = {0, 0, 100, 100};
  opt.l_shape_fraction = 0.5;
  const Environment env = synthetic::generate_scene(opt, 3);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p{u(rng), u(rng)};
    bool oracle = false;
    for (const auto& b : env.buildings()) oracle = oracle || winding_number(p, b.footprint) != 0;
    CHECK(point_in_building(p, env) == oracle);
  }
}

TEST_CASE("boundary points are classified without double counting") {
  // Two squares sharing the edge x = 1: a point on it belongs to exactly one.
  const std::vector<Vec2> left{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<Vec2> right{{1, 0}, {2, 0}, {2, 1}, {1, 1}};
  for (double y : {0.1, 0.5, 0.9}) {
    const int hits = int(point_in_footprint({1.0, y}, left)) + int(point_in_footprint({1.0, y}, right));
    CHECK(hits == 1);
  }
}

TEST_CASE("environment derives walls and bbox") {
  const Environment env("e", {box(0, 0, 1, 1, 5), {"tri", {{3, 3}, {5, 3}, {3, 6}}, 7}});
  CHECK(env.walls().size() == 7);
  const Box2 bb = env.bbox();
  CHECK(bb.min_x == 0.0);
  CHECK(bb.max_x == 5.0);
  CHECK(bb.max_y == 6.0);
  for (const auto& w : env.walls()) {
    CHECK(bb.contains(w.p1));
    CHECK(bb.contains(w.p2));
  }
}

TEST_CASE("environment JSON parsing and round trip") {
  const std::string text = R"({"name": "block", "buildings": [
    {"footprint": [[0,0],[0,4],[4,4],[4,0]], "height": 12.5},
    {"footprint": [[10,0],[14,0],[12,3]], "height": 6}]})";
  const Environment env = parse_environment_json(text);
  CHECK(env.name() == "block");
  REQUIRE(env.buildings().size() == 2);
  CHECK(signed_area2(env.buildings()[0].footprint) > 0.0);
  const Environment back = parse_environment_json(environment_to_json(env));
  REQUIRE(back.walls().size() == env.walls().size());
  for (std::size_t i = 0; i < env.walls().size(); ++i) {
    CHECK(back.walls()[i].p1 == env.walls()[i].p1);
    CHECK(back.walls()[i].p2 == env.walls()[i].p2);
    CHECK(back.walls()[i].height == env.walls()[i].height);
  }

  CHECK_THROWS_AS(parse_environment_json("{"), GeometryError);
  CHECK_THROWS_AS(parse_environment_json(R"({"name": "x"})"), GeometryError);
  CHECK_THROWS_AS(
      parse_environment_json(R"({"buildings": [{"footprint": [[0,0],[1,0]], "height": 3}]})"),
      GeometryError);
  CHECK_THROWS_AS(
      parse_environment_json(
          R"({"buildings": [{"footprint": [[0,0],[1,0],[0,"a"]], "height": 3}]})"),
      GeometryError);
  CHECK_THROWS_AS(
      parse_environment_json(
          R"({"buildings": [{"footprint": [[0,0],[1,0],[0,1]], "height": -1}]})"),
      GeometryError);
}
