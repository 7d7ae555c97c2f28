// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radiogrid/dataset.hpp"
#include "radiogrid/geometry.hpp"
#include "radiogrid/pathloss.hpp"

namespace radiogrid::cli {

struct TransmitterConfig {
  std::optional<geometry::Vec2> position;  // placed automatically when absent
  std::vector<double> altitudes;
  std::vector<std::filesystem::path> external_maps;  // one NPY per altitude
};

struct EnvironmentConfig {
  std::string name;
  std::string city;  // defaults to name
  std::optional<std::filesystem::path> path;
  std::size_t synthetic_buildings = 0;
  std::uint64_t synthetic_seed = 0;
  std::vector<TransmitterConfig> transmitters;
};

enum class PatchMode { kStructured, kRandom, kQuadrants };
std::string_view to_string(PatchMode mode) noexcept;
PatchMode patch_mode_from_string(std::string_view name);

struct PatchConfig {
  PatchMode mode = PatchMode::kStructured;
  std::size_t random_count = 82;
  bool augment = true;
};

struct SplitConfig {
  dataset::SplitMode mode = dataset::SplitMode::kPerTransmitter;
  std::vector<std::size_t> test_transmitters{2};
  std::string holdout_city;
};

struct RunConfig {
  std::string name = "radiogrid";
  std::vector<EnvironmentConfig> environments;
  geometry::ReceiverGridSpec grid;
  double frequency_ghz = 28.0;
  double tx_power_dbm = 30.0;
  pathloss::ModelSet models;
  bool smoothing = false;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::filesystem::path output = "radiogrid-out";
  PatchConfig patches;
  SplitConfig split;
  bool export_npy = false;

  /// Canonical JSON of the resolved configuration.
  std::string to_json() const;
  /// Hex FNV-1a of to_json().
  std::string hash() const;
  /// Paths exist, altitudes exceed the receiver height, shapes fit the
  /// patch mode.
  void validate() const;
};

/// Parses a run configuration. Relative paths resolve against base_dir.
RunConfig parse_run_config(std::string_view toml_text,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Reads model parameters (CI, 3GPP, ABG per band) into `models`.
void parse_model_file(std::string_view toml_text, pathloss::ModelSet& models);

struct Overrides {
  std::optional<std::string> model;
  std::optional<std::string> band;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::filesystem::path> output;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

std::string hex64(std::uint64_t value);

}  // namespace radiogrid::cli
