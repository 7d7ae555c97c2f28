// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <bit>
#include <cmath>

#include "radiogrid/channels.hpp"
#include "radiogrid/error.hpp"
#include "test_support.hpp"

using namespace radiogrid;
using namespace radiogrid::channels;
using radiogrid::testing::box;
using radiogrid::testing::random_grid;
using radiogrid::testing::winding_number;

namespace {

std::size_t hamming(const FeatureGrid& a, const FeatureGrid& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

std::size_t bit_changes(const FeatureGrid& a, const FeatureGrid& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    n += std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i]);
  }
  return n;
}

}  // namespace

TEST_CASE("log-distance values") {
  const geometry::ReceiverGridSpec one{1, 1, {0, 0}, 1, 1, 1.5};
  CHECK(log_distance_channel({0, 0, 10}, one)[0] ==
        doctest::Approx(18.588).epsilon(0.001 / 18.588));
  CHECK(log_distance_channel({0, 0, 2.5}, one)[0] == doctest::Approx(0.0));
  CHECK(log_distance_channel({0, 0, 11.5}, one)[0] == doctest::Approx(20.0));
  CHECK_THROWS_AS(log_distance_channel({0, 0, 1.5}, one), GridError);
  CHECK(log_distance_channel({0, 0, 10}, one).kind() == GridKind::kLogDistance);
}

TEST_CASE("log-distance is invariant under joint translation") {
  geometry::ReceiverGridSpec g{6, 9, {2.0, -3.0}, 1.5, 2.5, 1.5};
  const auto a = log_distance_channel({40, 12, 30}, g);
  g.origin = {102.0, 47.0};
  const auto b = log_distance_channel({140, 62, 30}, g);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("building mask channel") {
  const geometry::ReceiverGridSpec g{4, 4, {0.25, 0.25}, 0.5, 0.5, 1.5};
  CHECK(building_mask_channel(g, geometry::Environment("e", {})).values()[0] == 0.0);
  const auto all = building_mask_channel(g, geometry::Environment("e", {box(-1, -1, 5, 5, 3)}));
  for (double v : all.values()) CHECK(v == 1.0);

  const geometry::Environment unit("u", {box(0, 0, 1, 1, 3)});
  const auto m = building_mask_channel(g, unit);
  CHECK(m.kind() == GridKind::kBuildingMask);
  const auto& fp = unit.buildings()[0].footprint;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const bool inside = winding_number(g.point(r, c).xy(), fp) != 0;
      CHECK(m(r, c) == (inside ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("normalization round trip") {
  const FeatureGrid g = random_grid(12, 17, 3, GridKind::kPathloss);
  const std::array<FeatureGrid, 1> train{g};
  const NormalizationStats stats = compute_stats(train);
  const Normalized n = normalize(g, stats);
  CHECK(n.out_of_range == 0);
  CHECK(n.grid.kind() == GridKind::kNormalized);
  double lo = 1.0, hi = 0.0;
  for (double v : n.grid.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);
  const FeatureGrid back = denormalize(n.grid, stats, GridKind::kPathloss);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(back[i] - g[i]) <= 1e-12 * std::max(1.0, std::abs(g[i])));
  }
}

TEST_CASE("held-out values beyond the training range are kept and counted") {
  const NormalizationStats stats{100.0, 150.0};
  FeatureGrid test(1, 3, GridKind::kPathloss);
  test[0] = 90.0;
  test[1] = 125.0;
  test[2] = 175.0;
  const Normalized n = normalize(test, stats);
  CHECK(n.out_of_range == 2);
  CHECK(n.grid[0] == doctest::Approx(-0.2));
  CHECK(n.grid[2] == doctest::Approx(1.5));
}

TEST_CASE("masks pass through normalization and degenerate stats are rejected") {
  const FeatureGrid mask = random_grid(5, 5, 1, GridKind::kLosMask);
  CHECK(normalize(mask, {3.0, 9.0}).grid == mask);
  CHECK(denormalize(mask, {3.0, 9.0}, GridKind::kLosMask) == mask);
  CHECK_THROWS_AS(normalize(random_grid(2, 2, 1), {4.0, 4.0}), GridError);
}

TEST_CASE("mask flipping") {
  const FeatureGrid m = random_grid(128, 128, 5, GridKind::kLosMask);
  CHECK(flip_mask(m, 0.0, 1) == m);
  const FeatureGrid all = flip_mask(m, 1.0, 1);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(all[i] == 1.0 - m[i]);
  for (double f : {0.01, 0.05, 0.10, 0.333}) {
    const FeatureGrid flipped = flip_mask(m, f, 7);
    CHECK(hamming(m, flipped) == static_cast<std::size_t>(std::floor(f * 16384.0)));
    CHECK(flip_mask(m, f, 7) == flipped);
    // Same selection applied twice restores the mask.
    FeatureGrid twice = flipped;
    for (std::size_t i : flip_indices(m.size(), f, 7)) twice[i] = 1.0 - twice[i];
    CHECK(twice == m);
  }
  CHECK_THROWS_AS(flip_mask(m, 1.5, 1), GridError);
  CHECK_THROWS_AS(flip_mask(m, -0.1, 1), GridError);
  CHECK_THROWS_AS(flip_mask(random_grid(4, 4, 1), 0.1, 1), GridError);
}

TEST_CASE("distance perturbation stays in its regime") {
  geometry::ReceiverGridSpec g{64, 96, {0, 0}, 8.0, 8.0, 1.5};
  const FeatureGrid d = distance_grid({100, 100, 40}, g);
  std::size_t near = 0;
  for (double v : d.values()) near += v < kNearFieldLimit;
  REQUIRE(near > 0);
  REQUIRE(near < d.size());

  CHECK(perturb_distance(d, DistanceRegime::kNear, 0.0, 0.05, 1).grid == d);

  for (double sigma : {0.01, 0.05, 0.10}) {
    const auto far = perturb_distance(d, DistanceRegime::kFar, 0.1, sigma, 3);
    CHECK(far.changed.size() == static_cast<std::size_t>(std::floor(0.1 * double(d.size() - near))));
    CHECK(bit_changes(d, far.grid) == far.changed.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] < kNearFieldLimit) {
        CHECK(std::bit_cast<std::uint64_t>(far.grid[i]) == std::bit_cast<std::uint64_t>(d[i]));
      }
    }
    const auto nr = perturb_distance(d, DistanceRegime::kNear, 0.1, sigma, 3);
    CHECK(nr.changed.size() == static_cast<std::size_t>(std::floor(0.1 * double(near))));
    for (std::size_t i : nr.changed) CHECK(d[i] < kNearFieldLimit);
    CHECK(perturb_distance(d, DistanceRegime::kNear, 0.1, sigma, 3).grid == nr.grid);
  }
}

TEST_CASE("perturbed distances are clamped and empty regimes are a no-op") {
  FeatureGrid d(1, 50, GridKind::kDistance, 10.0);
  const auto p = perturb_distance(d, DistanceRegime::kNear, 1.0, 5.0, 2);
  for (double v : p.grid.values()) CHECK(v >= kMinPerturbedDistance);
  const auto none = perturb_distance(d, DistanceRegime::kFar, 0.5, 0.1, 2);
  CHECK(none.changed.empty());
  CHECK(none.grid == d);
}
