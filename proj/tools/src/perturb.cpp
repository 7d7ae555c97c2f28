// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "radiogrid/channels.hpp"
#include "radiogrid/error.hpp"
#include "radiogrid/rng.hpp"
#include "radiogrid_cli/commands.hpp"

namespace radiogrid::cli {
namespace {

std::size_t channel_index(const dataset::DatasetManifest& m, std::string_view name) {
  const auto it = std::find(m.channel_order.begin(), m.channel_order.end(), name);
  if (it == m.channel_order.end()) {
    throw DatasetError("dataset has no '" + std::string(name) + "' channel");
  }
  return static_cast<std::size_t>(it - m.channel_order.begin());
}

void perturb_distance_channel(FeatureGrid& logd, const channels::NormalizationStats& stats,
                              channels::DistanceRegime regime, double fraction, double sigma,
                              std::uint64_t seed) {
  const double span = stats.max - stats.min;
  std::vector<double> meters(logd.size());
  for (std::size_t i = 0; i < logd.size(); ++i) {
    meters[i] = std::pow(10.0, (logd[i] * span + stats.min) / 20.0);
  }
  const FeatureGrid distance(logd.rows(), logd.cols(), GridKind::kDistance, std::move(meters));
  const auto noisy = channels::perturb_distance(distance, regime, fraction, sigma, seed);
  // Only selected receivers are rewritten; the rest keep their stored bits.
  for (std::size_t i : noisy.changed) {
    logd[i] = (20.0 * std::log10(noisy.grid[i]) - stats.min) / span;
  }
}

}  // namespace

dataset::DatasetManifest cmd_perturb(const PerturbOptions& o, std::ostream& out) {
  const bool distance = o.kind == "distance-near" || o.kind == "distance-far";
  if (!distance && o.kind != "los" && o.kind != "building") {
    throw ConfigError("unknown perturbation kind '" + o.kind +
                      "' (expected distance-near, distance-far, los or building)");
  }
  if (!(o.level >= 0.0 && o.level <= 100.0)) {
    throw ConfigError(fmt::format("perturbation level {} is outside [0, 100] percent", o.level));
  }
  if (!(o.fraction >= 0.0 && o.fraction <= 1.0)) {
    throw ConfigError("distance-noise fraction must lie in [0, 1]");
  }
  if (std::filesystem::exists(o.output) && std::filesystem::exists(o.dataset) &&
      std::filesystem::equivalent(o.output, o.dataset)) {
    throw ConfigError("perturb output must differ from the input dataset");
  }

  dataset::DatasetManifest m = dataset::read_manifest(o.dataset);
  std::size_t channel = 0;
  channels::NormalizationStats logd_stats;
  if (distance) {
    channel = channel_index(m, "log_distance");
    const auto it = m.normalization.find("log_distance");
    if (it == m.normalization.end()) {
      throw DatasetError("dataset manifest lacks log_distance normalization stats");
    }
    logd_stats = it->second;
  } else {
    channel = channel_index(m, o.kind == "los" ? "los_mask" : "building_mask");
  }
  const auto regime = o.kind == "distance-near" ? channels::DistanceRegime::kNear
                                                : channels::DistanceRegime::kFar;
  const double ratio = o.level / 100.0;

  dataset::DatasetWriter writer(o.output);
  std::size_t touched = 0;
  for (const dataset::FileEntry& e : m.files) {
    dataset::Sample s = dataset::read_sample(o.dataset, m, e);
    if (e.split == "test" && ratio > 0.0) {
      const std::uint64_t seed = stream_key(o.seed, stable_hash(e.sample_id));
      FeatureGrid& g = s.channels[channel];
      if (distance) {
        perturb_distance_channel(g, logd_stats, regime, o.fraction, ratio, seed);
      } else {
        g = channels::flip_mask(g, ratio, seed);
      }
      ++touched;
    }
    writer.add(s, e.split);
  }
  m.seeds["perturb"] = o.seed;
  m.metadata["perturbation"] = fmt::format("{}:{}", o.kind, o.level);
  if (distance) m.metadata["perturbation_fraction"] = fmt::format("{}", o.fraction);
  writer.commit(m);
  m.files = writer.files();
  out << fmt::format("perturbed {} of {} samples ({} at {}%) into {}\n", touched,
                     m.files.size(), o.kind, o.level, o.output.string());
  return m;
}

}  // namespace radiogrid::cli
