// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "radiogrid/geometry.hpp"
#include "radiogrid/synthetic.hpp"

using namespace radiogrid;
using namespace radiogrid::geometry;

namespace {

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

TEST_CASE("generated scenes are valid and non-overlapping") {
  for (std::size_t n : {5u, 20u, 60u, 67u}) {
    synthetic::SceneOptions opt;
    opt.buildings = n;
    const Environment env = synthetic::generate_scene(opt, n * 13);
    REQUIRE(env.buildings().size() == n);
    const auto& bs = env.buildings();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK_NOTHROW(validate_building(bs[i], i));
      CHECK(bs[i].height >= opt.min_height);
      CHECK(bs[i].height <= opt.max_height);
      for (Vec2 v : bs[i].footprint) CHECK(opt.extent.contains(v));
      for (std::size_t j = i + 1; j < n; ++j) {
        // No vertex inside another footprint and no crossing edges.
        for (Vec2 v : bs[j].footprint) CHECK_FALSE(point_in_footprint(v, bs[i].footprint));
        for (Vec2 v : bs[i].footprint) CHECK_FALSE(point_in_footprint(v, bs[j].footprint));
        const auto& a = bs[i].footprint;
        const auto& b = bs[j].footprint;
        for (std::size_t p = 0; p < a.size(); ++p) {
          for (std::size_t q = 0; q < b.size(); ++q) {
            CHECK_FALSE(segments_cross(a[p], a[(p + 1) % a.size()], b[q], b[(q + 1) % b.size()]));
          }
        }
      }
    }
  }
}

TEST_CASE("scene generation is deterministic") {
  synthetic::SceneOptions opt;
  const auto a = synthetic::generate_scene(opt, 8);
  const auto b = synthetic::generate_scene(opt, 8);
  REQUIRE(a.walls().size() == b.walls().size());
  for (std::size_t i = 0; i < a.walls().size(); ++i) {
    CHECK(a.walls()[i].p1 == b.walls()[i].p1);
    CHECK(a.walls()[i].height == b.walls()[i].height);
  }
}

TEST_CASE("open positions avoid footprints") {
  synthetic::SceneOptions opt;
  opt.buildings = 60;
  const auto env = synthetic::generate_scene(opt, 2);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Point3 p = synthetic::open_position(env, opt.extent, 30.0, s);
    CHECK(p.z == 30.0);
    CHECK(opt.extent.contains(p.xy()));
    CHECK_FALSE(point_in_building(p.xy(), env));
  }
}
