// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <chrono>

#include "radiogrid/channels.hpp"
#include "radiogrid/error.hpp"
#include "radiogrid/log.hpp"
#include "radiogrid/npy.hpp"
#include "radiogrid/rng.hpp"
#include "radiogrid/synthetic.hpp"
#include "radiogrid_cli/commands.hpp"

namespace radiogrid::cli {

geometry::Box2 grid_extent(const geometry::ReceiverGridSpec& grid) {
  return {grid.origin.x, grid.origin.y,
          grid.origin.x + static_cast<double>(grid.cols - 1) * grid.spacing_x,
          grid.origin.y + static_cast<double>(grid.rows - 1) * grid.spacing_y};
}

std::string scenario_id(std::string_view environment, std::size_t transmitter,
                        double altitude) {
  return fmt::format("{}-tx{}-h{:g}", environment, transmitter, altitude);
}

ScenarioBatch build_scenarios(const RunConfig& config, bool keep_going) {
  config.validate();
  ScenarioBatch batch;
  const geometry::Box2 extent = grid_extent(config.grid);
  for (const EnvironmentConfig& ec : config.environments) {
    geometry::Environment env;
    try {
      if (ec.path) {
        env = geometry::load_environment(*ec.path);
      } else if (ec.synthetic_buildings > 0) {
        synthetic::SceneOptions options;
        options.buildings = ec.synthetic_buildings;
        options.extent = extent;
        env = synthetic::generate_scene(options, ec.synthetic_seed, ec.name);
      } else {
        env = geometry::Environment(ec.name, {});
      }
    } catch (const Error& e) {
      if (!keep_going) throw;
      log().error("environment '{}': {}", ec.name, e.what());
      batch.failures.push_back(ec.name + ": " + e.what());
      continue;
    }
    const std::size_t env_index = batch.environments.size();
    for (std::size_t t = 0; t < ec.transmitters.size(); ++t) {
      const TransmitterConfig& tc = ec.transmitters[t];
      geometry::Vec2 xy;
      if (tc.position) {
        xy = *tc.position;
      } else {
        xy = synthetic::open_position(env, extent, 0.0,
                                      stream_key(config.seed, stable_hash(ec.name), t))
                 .xy();
      }
      for (std::size_t a = 0; a < tc.altitudes.size(); ++a) {
        Scenario s;
        s.id = scenario_id(ec.name, t, tc.altitudes[a]);
        s.city = ec.city;
        s.environment = env_index;
        s.transmitter = t;
        s.spec.id = s.id;
        s.spec.tx = {xy.x, xy.y, tc.altitudes[a]};
        s.spec.carrier_frequency_ghz = config.frequency_ghz;
        s.spec.tx_power_dbm = config.tx_power_dbm;
        s.spec.grid = config.grid;
        s.spec.site = ec.name;
        s.spec.validate();
        if (!tc.external_maps.empty()) s.external_map = tc.external_maps[a];
        batch.scenarios.push_back(std::move(s));
      }
    }
    batch.environments.push_back(std::move(env));
  }
  for (std::size_t i = 0; i < batch.scenarios.size(); ++i) {
    for (std::size_t j = i + 1; j < batch.scenarios.size(); ++j) {
      if (batch.scenarios[i].id == batch.scenarios[j].id) {
        throw ConfigError("duplicate scenario id '" + batch.scenarios[i].id + "'");
      }
    }
  }
  return batch;
}

ScenarioChannels compute_channels(const RunConfig& config, const Scenario& scenario,
                                  const geometry::Environment& env, unsigned threads) {
  ScenarioChannels ch;
  const auto& grid = scenario.spec.grid;
  ch.distance = channels::distance_grid(scenario.spec.tx, grid);
  ch.log_distance = channels::log_distance_from_distance(ch.distance);
  ch.los_mask = los::compute_los_mask(scenario.spec.tx, grid, env, {threads}, &ch.los_stats);
  ch.building_mask = channels::building_mask_channel(grid, env);
  std::optional<pathloss::PathlossMap> external;
  if (scenario.external_map) {
    external = pathloss::PathlossMap{npy::load(*scenario.external_map, GridKind::kPathloss),
                                     pathloss::Provenance::kExternal};
    external->grid.validate();
  }
  ch.pathloss = pathloss::assemble_pathloss_map(scenario.spec, ch.los_mask, ch.building_mask,
                                                config.models,
                                                external ? &*external : nullptr);
  if (config.smoothing) ch.pathloss = pathloss::smooth_map(ch.pathloss);
  return ch;
}

int cmd_los(const RunConfig& config, std::ostream& out) {
  const ScenarioBatch batch = build_scenarios(config, /*keep_going=*/true);
  const auto dir = config.output / "los";
  std::filesystem::create_directories(dir);
  out << fmt::format("{:<28} {:>9} {:>7} {:>7} {:>7} {:>9} {:>7} {:>10}\n", "scenario",
                     "buildings", "walls", "facing", "tested", "receivers", "los %",
                     "seconds");
  for (const Scenario& s : batch.scenarios) {
    const geometry::Environment& env = batch.environments[s.environment];
    los::LosStats stats;
    const auto start = std::chrono::steady_clock::now();
    const FeatureGrid mask =
        los::compute_los_mask(s.spec.tx, s.spec.grid, env, {config.threads}, &stats);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    npy::save(dir / (s.id + ".npy"), mask);
    double visible = 0.0;
    for (double v : mask.values()) visible += v;
    out << fmt::format("{:<28} {:>9} {:>7} {:>7} {:>7} {:>9} {:>7.2f} {:>10.4f}\n", s.id,
                       env.buildings().size(), stats.walls, stats.facing, stats.tested,
                       stats.receivers, 100.0 * visible / static_cast<double>(mask.size()),
                       seconds);
  }
  for (const std::string& f : batch.failures) {
    log().error("skipped environment {}", f);
  }
  return batch.failures.empty() ? 0 : 1;
}

}  // namespace radiogrid::cli
