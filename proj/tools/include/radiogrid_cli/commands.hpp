// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "radiogrid/dataset_io.hpp"
#include "radiogrid/feature_grid.hpp"
#include "radiogrid/geometry.hpp"
#include "radiogrid/los.hpp"
#include "radiogrid/metrics.hpp"
#include "radiogrid/pathloss.hpp"
#include "radiogrid_cli/config.hpp"

namespace radiogrid::cli {

/// One (environment, transmitter, altitude) combination.
struct Scenario {
  std::string id;
  std::string city;
  std::size_t environment = 0;  // index into ScenarioBatch::environments
  std::size_t transmitter = 0;  // index within its environment
  geometry::TransmitterScenario spec;
  std::optional<std::filesystem::path> external_map;
};

struct ScenarioBatch {
  std::vector<geometry::Environment> environments;
  std::vector<Scenario> scenarios;
  std::vector<std::string> failures;  // environments that could not be loaded
};

geometry::Box2 grid_extent(const geometry::ReceiverGridSpec& grid);

/// Loads or synthesizes every environment and expands its transmitters.
/// With `keep_going`, unreadable environments are recorded in `failures`
/// and skipped; otherwise the first failure is thrown.
ScenarioBatch build_scenarios(const RunConfig& config, bool keep_going = false);

std::string scenario_id(std::string_view environment, std::size_t transmitter,
                        double altitude);

/// Full-grid channels of one scenario, in physical units.
struct ScenarioChannels {
  FeatureGrid distance;
  FeatureGrid log_distance;
  FeatureGrid los_mask;
  FeatureGrid building_mask;
  pathloss::PathlossMap pathloss;
  los::LosStats los_stats;
};

ScenarioChannels compute_channels(const RunConfig& config, const Scenario& scenario,
                                  const geometry::Environment& env, unsigned threads);

/// Writes one LOS mask per scenario and prints a timing table. Returns the
/// process exit status (1 when any environment failed).
int cmd_los(const RunConfig& config, std::ostream& out);

struct GenerateResult {
  dataset::DatasetManifest manifest;
  std::size_t samples = 0;
};

/// Builds the full dataset under config.output. With dry_run, prints the
/// manifest preview and writes nothing.
GenerateResult cmd_generate(const RunConfig& config, bool dry_run, std::ostream& out);

struct PerturbOptions {
  std::filesystem::path dataset;
  std::filesystem::path output;
  std::string kind;           // distance-near, distance-far, los, building
  double level = 0.0;         // percent
  double fraction = 0.10;     // receivers selected for distance noise
  std::uint64_t seed = 0;
};

/// Copies the dataset, perturbing the designated channel of test samples.
dataset::DatasetManifest cmd_perturb(const PerturbOptions& options, std::ostream& out);

struct EvaluateOptions {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> predictions;  // <sample_id>.npy, normalized
  std::optional<pathloss::ModelChoice> model;          // synthesize predictions
  std::optional<pathloss::Band> band;
  std::string split = "test";  // test, train or all
  std::optional<std::filesystem::path> report_json;
};

metrics::MetricReport cmd_evaluate(const EvaluateOptions& options, std::ostream& out);

/// Empirical-model prediction (dB, no indoor offset) for one stored sample.
FeatureGrid empirical_prediction(const dataset::ScenarioRecord& scenario,
                                 const dataset::Sample& sample,
                                 const pathloss::ModelSet& models,
                                 std::size_t los_channel);

struct BenchRow {
  std::string scenario;
  std::size_t buildings = 0;
  std::size_t walls = 0;
  std::size_t facing = 0;
  std::size_t tested = 0;
  std::size_t receivers = 0;
  double filtered_seconds = 0.0;
  double brute_seconds = 0.0;
  bool identical = false;

  double speedup() const { return filtered_seconds > 0 ? brute_seconds / filtered_seconds : 0; }
  double facing_fraction() const {
    return walls == 0 ? 0.0 : static_cast<double>(facing) / static_cast<double>(walls);
  }
};

/// Best-of-`repeats` wall time for the filtered and brute-force LOS paths.
BenchRow bench_scene(std::string name, const geometry::Environment& env,
                     const geometry::Point3& tx, const geometry::ReceiverGridSpec& grid,
                     unsigned threads, std::size_t repeats);

struct BenchOptions {
  std::optional<RunConfig> config;  // otherwise a synthetic 67-building scene
  std::size_t buildings = 67;
  std::size_t repeats = 3;
  std::uint64_t seed = 0;
  double altitude = 40.0;
  unsigned threads = 1;
};

std::vector<BenchRow> cmd_bench(const BenchOptions& options, std::ostream& out);

}  // namespace radiogrid::cli
