// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include "radiogrid/channels.hpp"
#include "radiogrid/error.hpp"
#include "radiogrid/log.hpp"
#include "radiogrid/npy.hpp"
#include "radiogrid/parallel.hpp"
#include "radiogrid/rng.hpp"
#include "radiogrid_cli/commands.hpp"

namespace radiogrid::cli {
namespace {

std::vector<dataset::PatchSpec> scenario_patches(const RunConfig& config,
                                                 std::uint64_t patch_seed) {
  const auto& g = config.grid;
  switch (config.patches.mode) {
    case PatchMode::kStructured: {
      auto specs = dataset::structured_patches(g.rows, g.cols);
      const auto extra =
          dataset::random_patches(g.rows, g.cols, config.patches.random_count, patch_seed, specs);
      specs.insert(specs.end(), extra.begin(), extra.end());
      return specs;
    }
    case PatchMode::kRandom:
      return dataset::random_patches(g.rows, g.cols, config.patches.random_count, patch_seed);
    case PatchMode::kQuadrants:
      return dataset::quadrant_patches();
  }
  return {};
}

dataset::SplitAssignment assign_split(const RunConfig& config, const ScenarioBatch& batch) {
  std::vector<dataset::ScenarioKey> keys;
  std::vector<std::string> ids;
  for (const Scenario& s : batch.scenarios) {
    keys.push_back({s.id, s.city, s.transmitter});
    ids.push_back(s.id);
  }
  dataset::SplitAssignment split =
      config.split.mode == dataset::SplitMode::kCrossCity
          ? dataset::SplitAssignment::cross_city(keys, config.split.holdout_city)
          : dataset::SplitAssignment::per_transmitter(keys, config.split.test_transmitters);
  split.validate(ids);
  return split;
}

dataset::ScenarioRecord make_record(const Scenario& s,
                                    std::vector<dataset::PatchSpec> patches) {
  dataset::ScenarioRecord r;
  r.id = s.id;
  r.city = s.city;
  r.transmitter = s.transmitter;
  r.tx_x = s.spec.tx.x;
  r.tx_y = s.spec.tx.y;
  r.tx_z = s.spec.tx.z;
  r.frequency_ghz = s.spec.carrier_frequency_ghz;
  const auto& g = s.spec.grid;
  r.origin_x = g.origin.x;
  r.origin_y = g.origin.y;
  r.spacing_x = g.spacing_x;
  r.spacing_y = g.spacing_y;
  r.rx_height = g.rx_height;
  r.rows = g.rows;
  r.cols = g.cols;
  r.patches = std::move(patches);
  return r;
}

}  // namespace

GenerateResult cmd_generate(const RunConfig& config, bool dry_run, std::ostream& out) {
  const ScenarioBatch batch = build_scenarios(config);
  GenerateResult result;
  dataset::DatasetManifest& m = result.manifest;
  m.split = assign_split(config, batch);
  m.config_hash = config.hash();
  m.seeds["run"] = config.seed;
  m.seeds["ci_shadow"] = config.models.ci.rng_seed;
  m.metadata = {{"generator", "radiogrid 0.1.0"},
                {"model", std::string(pathloss::to_string(config.models.choice))},
                {"band", std::string(pathloss::to_string(config.models.band))},
                {"h_e", fmt::format("{}", config.models.h_e)},
                {"indoor_offset_db", fmt::format("{}", config.models.indoor_offset_db)},
                {"propagation_speed", fmt::format("{}", config.models.propagation_speed)},
                {"smoothing", config.smoothing ? "true" : "false"},
                {"patch_mode", std::string(to_string(config.patches.mode))},
                {"augment", config.patches.augment ? "true" : "false"}};
  for (const Scenario& s : batch.scenarios) {
    const std::uint64_t patch_seed = stream_key(config.seed, stable_hash(s.id));
    m.seeds["patches/" + s.id] = patch_seed;
    m.scenarios.push_back(make_record(s, scenario_patches(config, patch_seed)));
  }
  const std::size_t per_patch = config.patches.augment ? 3 : 1;
  std::size_t planned = 0;
  for (const auto& r : m.scenarios) planned += r.patches.size() * per_patch;

  if (dry_run) {
    out << dataset::manifest_to_json(m);
    out << fmt::format("dry run: {} scenarios, {} samples ({} train / {} test scenarios)\n",
                       m.scenarios.size(), planned, m.split.train.size(),
                       m.split.test.size());
    result.samples = planned;
    return result;
  }
  if (m.split.train.empty()) {
    throw ConfigError("the split leaves no training scenarios for normalization");
  }

  // Opening the writer removes any previous manifest before work starts.
  dataset::DatasetWriter writer(config.output);
  const std::size_t n = batch.scenarios.size();
  std::vector<ScenarioChannels> grids(n);
  parallel_for(n, config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Scenario& s = batch.scenarios[i];
      grids[i] = compute_channels(config, s, batch.environments[s.environment], 1);
      log().info("scenario {}: {} of {} walls tested", s.id, grids[i].los_stats.tested,
                 grids[i].los_stats.walls);
    }
  });

  std::vector<FeatureGrid> train_logd;
  std::vector<FeatureGrid> train_pl;
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.split.is_test(batch.scenarios[i].id)) {
      train_logd.push_back(grids[i].log_distance);
      train_pl.push_back(grids[i].pathloss.grid);
    }
  }
  const auto logd_stats = channels::compute_stats(train_logd);
  const auto pl_stats = channels::compute_stats(train_pl);
  train_logd.clear();
  train_pl.clear();
  m.normalization["log_distance"] = logd_stats;
  m.normalization["pathloss"] = pl_stats;

  const auto maps_dir = config.output / "maps";
  for (std::size_t i = 0; i < n; ++i) {
    const Scenario& s = batch.scenarios[i];
    const ScenarioChannels& ch = grids[i];
    const auto dir = maps_dir / s.id;
    std::filesystem::create_directories(dir);
    npy::save(dir / "log_distance.npy", ch.log_distance);
    npy::save(dir / "los_mask.npy", ch.los_mask);
    npy::save(dir / "building_mask.npy", ch.building_mask);
    npy::save(dir / "pathloss.npy", ch.pathloss.grid);

    const std::vector<FeatureGrid> inputs{channels::normalize(ch.log_distance, logd_stats).grid,
                                          ch.los_mask, ch.building_mask};
    const FeatureGrid target = channels::normalize(ch.pathloss.grid, pl_stats).grid;
    const auto& specs = m.scenarios[i].patches;
    std::vector<dataset::Sample> base(specs.size());
    parallel_for(specs.size(), config.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        base[k] = dataset::make_sample(dataset::sample_id(s.id, k, dataset::Flip::kNone),
                                       s.id, inputs, target, specs[k]);
      }
    });
    const auto samples = config.patches.augment ? dataset::augment(base) : base;
    const std::string split = m.split.is_test(s.id) ? "test" : "train";
    for (const dataset::Sample& sample : samples) {
      writer.add(sample, split);
      if (config.export_npy) {
        const auto npy_dir = config.output / "npy";
        std::filesystem::create_directories(npy_dir);
        for (std::size_t c = 0; c < sample.channels.size(); ++c) {
          npy::save(npy_dir / fmt::format("{}.{}.npy", sample.id, m.channel_order[c]),
                    sample.channels[c]);
        }
        npy::save(npy_dir / (sample.id + ".target.npy"), sample.target);
      }
    }
    grids[i] = {};
  }
  writer.commit(m);
  m.files = writer.files();
  result.samples = m.files.size();
  out << fmt::format("wrote {} samples from {} scenarios to {}\n", result.samples, n,
                     config.output.string());
  return result;
}

}  // namespace radiogrid::cli
