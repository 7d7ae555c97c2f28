// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radiogrid/channels.hpp"
#include "radiogrid/dataset.hpp"
#include "radiogrid/feature_grid.hpp"

namespace radiogrid::dataset {

inline constexpr std::uint16_t kSampleFormatVersion = 1;
inline constexpr int kManifestFormatVersion = 1;
inline constexpr std::string_view kManifestName = "manifest.json";
inline constexpr std::string_view kSampleExtension = ".rgrd";

/// Per-scenario record kept in the manifest.
struct ScenarioRecord {
  std::string id;
  std::string city;
  std::size_t transmitter = 0;
  double tx_x = 0.0;
  double tx_y = 0.0;
  double tx_z = 0.0;
  double frequency_ghz = 28.0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double spacing_x = 1.0;
  double spacing_y = 1.0;
  double rx_height = 1.5;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<PatchSpec> patches;  // before augmentation

  friend bool operator==(const ScenarioRecord&, const ScenarioRecord&) = default;
};

struct FileEntry {
  std::string file;
  std::string sample_id;
  std::string scenario;
  std::string split;  // "train" or "test"
  PatchSpec spec;
  std::uint32_t crc32 = 0;  // whole file
  std::uint64_t bytes = 0;

  friend bool operator==(const FileEntry&, const FileEntry&) = default;
};

struct DatasetManifest {
  int format_version = kManifestFormatVersion;
  std::vector<std::string> channel_order{"log_distance", "los_mask", "building_mask"};
  std::vector<GridKind> channel_kinds{GridKind::kNormalized, GridKind::kLosMask,
                                      GridKind::kBuildingMask};
  GridKind target_kind = GridKind::kNormalized;
  std::map<std::string, channels::NormalizationStats> normalization;
  SplitAssignment split;
  std::vector<ScenarioRecord> scenarios;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> metadata;
  std::string config_hash;
  std::vector<FileEntry> files;

  const ScenarioRecord* find_scenario(std::string_view id) const noexcept;
};

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(std::string_view text);

/// "RGRD" | u16 version | u16 channels | u32 rows | u32 cols | f32 LE
/// channels then target, row-major | u32 CRC32 of every preceding byte.
std::vector<std::uint8_t> encode_sample(const Sample& sample);

/// Decodes a sample file image. `name` is used in diagnostics.
/// Throws TruncatedFileError, FormatError, VersionError or ChecksumError.
Sample decode_sample(std::span<const std::uint8_t> bytes, std::string_view name,
                     std::span<const GridKind> channel_kinds, GridKind target_kind);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

/// Streams sample files into a directory and commits the manifest last.
/// A stale manifest is removed on construction, so an interrupted run
/// leaves no consumable dataset.
class DatasetWriter {
 public:
  explicit DatasetWriter(std::filesystem::path dir);

  const FileEntry& add(const Sample& sample, std::string_view split);

  /// Writes the manifest (with the accumulated file index) atomically.
  void commit(DatasetManifest manifest);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const std::vector<FileEntry>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<FileEntry> files_;
};

void write_dataset(std::span<const Sample> samples, const DatasetManifest& manifest,
                   const std::filesystem::path& dir);

struct Dataset {
  DatasetManifest manifest;
  std::vector<Sample> samples;
};

DatasetManifest read_manifest(const std::filesystem::path& dir);

/// Reads one indexed sample and verifies it against the manifest entry.
Sample read_sample(const std::filesystem::path& dir, const DatasetManifest& manifest,
                   const FileEntry& entry);

Dataset read_dataset(const std::filesystem::path& dir);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);

}  // namespace radiogrid::dataset
