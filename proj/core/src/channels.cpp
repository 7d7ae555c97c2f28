// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/channels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "radiogrid/error.hpp"
#include "radiogrid/log.hpp"
#include "radiogrid/rng.hpp"

namespace radiogrid::channels {
namespace {

std::size_t exact_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

void require_fraction(double fraction, const char* what) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw GridError(std::string(what) + ": fraction must lie in [0, 1]");
  }
}

}  // namespace

FeatureGrid distance_grid(const geometry::Point3& tx,
                          const geometry::ReceiverGridSpec& grid) {
  grid.validate();
  std::vector<double> values(grid.size());
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      values[r * grid.cols + c] = geometry::distance(tx, grid.point(r, c));
    }
  }
  return FeatureGrid(grid.rows, grid.cols, GridKind::kDistance, std::move(values));
}

FeatureGrid log_distance_from_distance(const FeatureGrid& distance) {
  std::vector<double> values(distance.size());
  for (std::size_t i = 0; i < distance.size(); ++i) {
    if (distance[i] < 1e-6) {
      throw GridError("log-distance: receiver " + std::to_string(i) +
                      " coincides with the transmitter (d < 1e-6 m)");
    }
    values[i] = 20.0 * std::log10(distance[i]);
  }
  return FeatureGrid(distance.rows(), distance.cols(), GridKind::kLogDistance,
                     std::move(values));
}

FeatureGrid log_distance_channel(const geometry::Point3& tx,
                                 const geometry::ReceiverGridSpec& grid) {
  return log_distance_from_distance(distance_grid(tx, grid));
}

FeatureGrid building_mask_channel(const geometry::ReceiverGridSpec& grid,
                                  const geometry::Environment& env) {
  grid.validate();
  FeatureGrid mask(grid.rows, grid.cols, GridKind::kBuildingMask);
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      if (geometry::point_in_building(grid.point(r, c).xy(), env)) mask(r, c) = 1.0;
    }
  }
  return mask;
}

void NormalizationStats::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
    throw GridError("normalization stats need finite max > min");
  }
}

NormalizationStats compute_stats(std::span<const FeatureGrid> grids) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const FeatureGrid& g : grids) {
    for (double v : g.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  NormalizationStats stats{lo, hi};
  stats.validate();
  return stats;
}

Normalized normalize(const FeatureGrid& g, const NormalizationStats& stats) {
  if (is_mask(g.kind())) return {g, 0};
  stats.validate();
  const double span = stats.max - stats.min;
  std::vector<double> values(g.size());
  std::size_t outside = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    values[i] = (g[i] - stats.min) / span;
    if (values[i] < 0.0 || values[i] > 1.0) ++outside;
  }
  if (outside > 0) {
    log().info("normalize: {} of {} values fall outside the training range",
               outside, g.size());
  }
  return {FeatureGrid(g.rows(), g.cols(), GridKind::kNormalized, std::move(values)),
          outside};
}

FeatureGrid denormalize(const FeatureGrid& g, const NormalizationStats& stats,
                        GridKind restored) {
  if (is_mask(g.kind())) return g;
  stats.validate();
  const double span = stats.max - stats.min;
  std::vector<double> values(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) values[i] = g[i] * span + stats.min;
  return FeatureGrid(g.rows(), g.cols(), restored, std::move(values));
}

DistancePerturbation perturb_distance(const FeatureGrid& distance,
                                      DistanceRegime regime, double fraction,
                                      double sigma_pct, std::uint64_t seed) {
  require_fraction(fraction, "perturb_distance");
  if (!(sigma_pct >= 0.0) || !std::isfinite(sigma_pct)) {
    throw GridError("perturb_distance: sigma must be finite and >= 0");
  }
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < distance.size(); ++i) {
    const bool near = distance[i] < kNearFieldLimit;
    if (near == (regime == DistanceRegime::kNear)) pool.push_back(i);
  }
  DistancePerturbation out{distance, {}};
  if (pool.empty()) {
    log().info("perturb_distance: no receivers in the {} regime",
               regime == DistanceRegime::kNear ? "near" : "far");
    return out;
  }
  const std::size_t k = exact_count(fraction, pool.size());
  const std::uint64_t key =
      stream_key(seed, std::bit_cast<std::uint64_t>(sigma_pct),
                 regime == DistanceRegime::kNear ? 1 : 2);
  auto engine = keyed_engine(key);
  out.changed.reserve(k);
  std::sample(pool.begin(), pool.end(), std::back_inserter(out.changed), k, engine);
  for (std::size_t i : out.changed) {
    auto noise_engine = keyed_engine(stream_key(key, i, 3));
    std::normal_distribution<double> normal(0.0, sigma_pct * distance[i]);
    out.grid[i] = std::max(kMinPerturbedDistance, distance[i] + normal(noise_engine));
  }
  return out;
}

std::vector<std::size_t> flip_indices(std::size_t n, double fraction,
                                      std::uint64_t seed) {
  require_fraction(fraction, "flip_mask");
  const std::size_t k = exact_count(fraction, n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> picked;
  picked.reserve(k);
  auto engine = keyed_engine(stream_key(seed, std::bit_cast<std::uint64_t>(fraction)));
  std::sample(all.begin(), all.end(), std::back_inserter(picked), k, engine);
  return picked;
}

FeatureGrid flip_mask(const FeatureGrid& mask, double fraction, std::uint64_t seed) {
  if (!is_mask(mask.kind())) {
    throw GridError("flip_mask: grid of kind '" + std::string(to_string(mask.kind())) +
                    "' is not a mask");
  }
  FeatureGrid out = mask;
  for (std::size_t i : flip_indices(mask.size(), fraction, seed)) {
    out[i] = 1.0 - out[i];
  }
  return out;
}

}  // namespace radiogrid::channels
