// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/dataset_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>

#include "radiogrid/error.hpp"
#include "radiogrid/log.hpp"

namespace radiogrid::dataset {
namespace {

using nlohmann::json;

constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kTrailerBytes = 4;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_grid(std::vector<std::uint8_t>& out, const FeatureGrid& g) {
  for (double v : g.values()) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

FeatureGrid get_grid(const std::uint8_t* p, std::size_t rows, std::size_t cols,
                     GridKind kind) {
  std::vector<double> values(rows * cols);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(get_u32(p + 4 * i));
  }
  return FeatureGrid(rows, cols, kind, std::move(values));
}

json patch_to_json(const PatchSpec& p) {
  return {{"row0", p.row0},           {"col0", p.col0},
          {"row_stride", p.row_stride}, {"col_stride", p.col_stride},
          {"size", p.size},           {"flip", std::string(to_string(p.flip))}};
}

PatchSpec patch_from_json(const json& j) {
  PatchSpec p;
  p.row0 = j.at("row0").get<std::size_t>();
  p.col0 = j.at("col0").get<std::size_t>();
  p.row_stride = j.at("row_stride").get<std::size_t>();
  p.col_stride = j.at("col_stride").get<std::size_t>();
  p.size = j.at("size").get<std::size_t>();
  p.flip = flip_from_string(j.at("flip").get<std::string>());
  return p;
}

std::string split_of(const SplitAssignment& split, std::string_view scenario) {
  return split.is_test(scenario) ? "test" : "train";
}

}  // namespace

const ScenarioRecord* DatasetManifest::find_scenario(std::string_view id) const noexcept {
  for (const ScenarioRecord& s : scenarios) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::string manifest_to_json(const DatasetManifest& m) {
  json j;
  j["format_version"] = m.format_version;
  j["channel_order"] = m.channel_order;
  json kinds = json::array();
  for (GridKind k : m.channel_kinds) kinds.push_back(std::string(to_string(k)));
  j["channel_kinds"] = kinds;
  j["target_kind"] = std::string(to_string(m.target_kind));
  json norm = json::object();
  for (const auto& [name, stats] : m.normalization) {
    norm[name] = {{"min", stats.min}, {"max", stats.max}};
  }
  j["normalization"] = norm;
  j["split"] = {{"mode", std::string(to_string(m.split.mode))},
                {"train", m.split.train},
                {"test", m.split.test}};
  json scenarios = json::array();
  for (const ScenarioRecord& s : m.scenarios) {
    json patches = json::array();
    for (const PatchSpec& p : s.patches) patches.push_back(patch_to_json(p));
    scenarios.push_back({{"id", s.id},
                         {"city", s.city},
                         {"transmitter", s.transmitter},
                         {"tx", {s.tx_x, s.tx_y, s.tx_z}},
                         {"frequency_ghz", s.frequency_ghz},
                         {"grid",
                          {{"rows", s.rows},
                           {"cols", s.cols},
                           {"origin", {s.origin_x, s.origin_y}},
                           {"spacing", {s.spacing_x, s.spacing_y}},
                           {"rx_height", s.rx_height}}},
                         {"patches", patches}});
  }
  j["scenarios"] = scenarios;
  j["seeds"] = m.seeds;
  j["metadata"] = m.metadata;
  j["config_hash"] = m.config_hash;
  json files = json::array();
  for (const FileEntry& f : m.files) {
    files.push_back({{"file", f.file},
                     {"sample_id", f.sample_id},
                     {"scenario", f.scenario},
                     {"split", f.split},
                     {"patch", patch_to_json(f.spec)},
                     {"crc32", f.crc32},
                     {"bytes", f.bytes}});
  }
  j["files"] = files;
  return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    DatasetManifest m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kManifestFormatVersion) {
      throw VersionError("manifest format version " + std::to_string(m.format_version) +
                         " is not supported (expected " +
                         std::to_string(kManifestFormatVersion) + ")");
    }
    m.channel_order = j.at("channel_order").get<std::vector<std::string>>();
    m.channel_kinds.clear();
    for (const auto& k : j.at("channel_kinds")) {
      m.channel_kinds.push_back(grid_kind_from_string(k.get<std::string>()));
    }
    if (m.channel_kinds.size() != m.channel_order.size()) {
      throw FormatError("manifest: channel_order and channel_kinds differ in length");
    }
    m.target_kind = grid_kind_from_string(j.at("target_kind").get<std::string>());
    for (const auto& [name, stats] : j.at("normalization").items()) {
      m.normalization[name] = {stats.at("min").get<double>(), stats.at("max").get<double>()};
    }
    const json& split = j.at("split");
    m.split.mode = split_mode_from_string(split.at("mode").get<std::string>());
    m.split.train = split.at("train").get<std::vector<std::string>>();
    m.split.test = split.at("test").get<std::vector<std::string>>();
    for (const json& s : j.at("scenarios")) {
      ScenarioRecord r;
      r.id = s.at("id").get<std::string>();
      r.city = s.at("city").get<std::string>();
      r.transmitter = s.at("transmitter").get<std::size_t>();
      const auto tx = s.at("tx").get<std::vector<double>>();
      if (tx.size() != 3) throw FormatError("manifest: scenario tx needs 3 coordinates");
      r.tx_x = tx[0];
      r.tx_y = tx[1];
      r.tx_z = tx[2];
      r.frequency_ghz = s.at("frequency_ghz").get<double>();
      const json& g = s.at("grid");
      r.rows = g.at("rows").get<std::size_t>();
      r.cols = g.at("cols").get<std::size_t>();
      r.origin_x = g.at("origin").at(0).get<double>();
      r.origin_y = g.at("origin").at(1).get<double>();
      r.spacing_x = g.at("spacing").at(0).get<double>();
      r.spacing_y = g.at("spacing").at(1).get<double>();
      r.rx_height = g.at("rx_height").get<double>();
      for (const json& p : s.at("patches")) r.patches.push_back(patch_from_json(p));
      m.scenarios.push_back(std::move(r));
    }
    m.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
    m.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    m.config_hash = j.at("config_hash").get<std::string>();
    for (const json& f : j.at("files")) {
      FileEntry e;
      e.file = f.at("file").get<std::string>();
      e.sample_id = f.at("sample_id").get<std::string>();
      e.scenario = f.at("scenario").get<std::string>();
      e.split = f.at("split").get<std::string>();
      e.spec = patch_from_json(f.at("patch"));
      e.crc32 = f.at("crc32").get<std::uint32_t>();
      e.bytes = f.at("bytes").get<std::uint64_t>();
      m.files.push_back(std::move(e));
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk =
        static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
    crc = crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> encode_sample(const Sample& sample) {
  const FeatureGrid& target = sample.target;
  if (sample.channels.size() > 0xFFFF) {
    throw FormatError("sample '" + sample.id + "' has too many channels");
  }
  for (const FeatureGrid& ch : sample.channels) {
    require_same_shape(ch, target, "encode_sample");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + (sample.channels.size() + 1) * target.size() * 4 +
              kTrailerBytes);
  for (char c : {'R', 'G', 'R', 'D'}) out.push_back(static_cast<std::uint8_t>(c));
  put_u16(out, kSampleFormatVersion);
  put_u16(out, static_cast<std::uint16_t>(sample.channels.size()));
  put_u32(out, static_cast<std::uint32_t>(target.rows()));
  put_u32(out, static_cast<std::uint32_t>(target.cols()));
  for (const FeatureGrid& ch : sample.channels) put_grid(out, ch);
  put_grid(out, target);
  put_u32(out, crc32_of(out));
  return out;
}

Sample decode_sample(std::span<const std::uint8_t> bytes, std::string_view name,
                     std::span<const GridKind> channel_kinds, GridKind target_kind) {
  const std::string file(name);
  if (bytes.size() < kHeaderBytes + kTrailerBytes) {
    throw TruncatedFileError(file + ": truncated (" + std::to_string(bytes.size()) +
                             " bytes, header needs " +
                             std::to_string(kHeaderBytes + kTrailerBytes) + ")");
  }
  const std::size_t body = bytes.size() - kTrailerBytes;
  const std::uint32_t stored = get_u32(bytes.data() + body);
  const std::uint32_t actual = crc32_of(bytes.first(body));
  const bool intact = stored == actual;
  auto checksum_error = [&] {
    return ChecksumError(file + ": checksum mismatch (stored " + std::to_string(stored) +
                         ", computed " + std::to_string(actual) + ")");
  };
  const bool magic_ok = std::equal(bytes.begin(), bytes.begin() + 4, "RGRD");
  const std::uint16_t version = get_u16(bytes.data() + 4);
  if (!magic_ok || version != kSampleFormatVersion) {
    if (!intact) throw checksum_error();
    if (!magic_ok) throw FormatError(file + ": bad magic (not a radiogrid sample file)");
    throw VersionError(file + ": sample format version " + std::to_string(version) +
                       " is not supported (expected " +
                       std::to_string(kSampleFormatVersion) + ")");
  }
  const std::size_t nch = get_u16(bytes.data() + 6);
  const std::size_t rows = get_u32(bytes.data() + 8);
  const std::size_t cols = get_u32(bytes.data() + 12);
  const std::size_t expected = kHeaderBytes + (nch + 1) * rows * cols * 4 + kTrailerBytes;
  if (bytes.size() < expected && !intact) {
    throw TruncatedFileError(file + ": truncated (" + std::to_string(bytes.size()) +
                             " of " + std::to_string(expected) + " bytes)");
  }
  if (!intact) throw checksum_error();
  if (bytes.size() != expected) {
    throw FormatError(file + ": header describes " + std::to_string(expected) +
                      " bytes, file has " + std::to_string(bytes.size()));
  }
  if (nch != channel_kinds.size()) {
    throw FormatError(file + ": holds " + std::to_string(nch) +
                      " channels, manifest lists " +
                      std::to_string(channel_kinds.size()));
  }
  Sample s;
  const std::uint8_t* p = bytes.data() + kHeaderBytes;
  for (std::size_t k = 0; k < nch; ++k) {
    s.channels.push_back(get_grid(p, rows, cols, channel_kinds[k]));
    p += rows * cols * 4;
  }
  s.target = get_grid(p, rows, cols, target_kind);
  return s;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(path.string() + ": cannot open");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetError(tmp.string() + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DatasetError(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

DatasetWriter::DatasetWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  std::filesystem::remove(dir_ / kManifestName);
}

const FileEntry& DatasetWriter::add(const Sample& sample, std::string_view split) {
  const auto bytes = encode_sample(sample);
  FileEntry e;
  e.file = sample.id + std::string(kSampleExtension);
  e.sample_id = sample.id;
  e.scenario = sample.scenario;
  e.split = std::string(split);
  e.spec = sample.spec;
  e.crc32 = crc32_of(bytes);
  e.bytes = bytes.size();
  write_file_atomic(dir_ / e.file, bytes);
  files_.push_back(std::move(e));
  return files_.back();
}

void DatasetWriter::commit(DatasetManifest manifest) {
  manifest.files = files_;
  const std::string text = manifest_to_json(manifest);
  write_file_atomic(dir_ / kManifestName,
                    {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  log().info("dataset: committed {} samples to {}", files_.size(), dir_.string());
}

void write_dataset(std::span<const Sample> samples, const DatasetManifest& manifest,
                   const std::filesystem::path& dir) {
  for (const Sample& s : samples) {
    if (manifest.find_scenario(s.scenario) == nullptr && !manifest.scenarios.empty()) {
      throw DatasetError("sample '" + s.id + "' references unknown scenario '" +
                         s.scenario + "'");
    }
    if (s.channels.size() != manifest.channel_kinds.size()) {
      throw DatasetError("sample '" + s.id + "' has " + std::to_string(s.channels.size()) +
                         " channels, manifest lists " +
                         std::to_string(manifest.channel_kinds.size()));
    }
  }
  DatasetWriter writer(dir);
  for (const Sample& s : samples) writer.add(s, split_of(manifest.split, s.scenario));
  writer.commit(manifest);
}

DatasetManifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / kManifestName;
  if (!std::filesystem::exists(path)) {
    throw DatasetError(dir.string() + ": no manifest (dataset missing or not committed)");
  }
  const auto bytes = read_file(path);
  return manifest_from_json({reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

Sample read_sample(const std::filesystem::path& dir, const DatasetManifest& manifest,
                   const FileEntry& entry) {
  const auto path = dir / entry.file;
  if (!std::filesystem::exists(path)) {
    throw DatasetError(path.string() + ": listed in manifest but missing");
  }
  const auto bytes = read_file(path);
  if (bytes.size() < entry.bytes) {
    throw TruncatedFileError(path.string() + ": truncated (" +
                             std::to_string(bytes.size()) + " of " +
                             std::to_string(entry.bytes) + " bytes)");
  }
  if (bytes.size() > entry.bytes) {
    throw FormatError(path.string() + ": " + std::to_string(bytes.size() - entry.bytes) +
                      " bytes longer than the manifest records");
  }
  Sample s = decode_sample(bytes, path.string(), manifest.channel_kinds,
                           manifest.target_kind);
  if (crc32_of(bytes) != entry.crc32) {
    throw ChecksumError(path.string() + ": checksum does not match the manifest");
  }
  s.id = entry.sample_id;
  s.scenario = entry.scenario;
  s.spec = entry.spec;
  return s;
}

Dataset read_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  ds.manifest = read_manifest(dir);
  ds.samples.reserve(ds.manifest.files.size());
  for (const FileEntry& e : ds.manifest.files) {
    ds.samples.push_back(read_sample(dir, ds.manifest, e));
  }
  return ds;
}

}  // namespace radiogrid::dataset
