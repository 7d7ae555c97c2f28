// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "radiogrid/dataset_io.hpp"
#include "radiogrid/error.hpp"
#include "test_support.hpp"

using namespace radiogrid;
using namespace radiogrid::dataset;
using radiogrid::testing::random_grid;
using radiogrid::testing::TempDir;

namespace {

// Float32 round trip of a value, the storage precision of sample files.
FeatureGrid to_f32(FeatureGrid g) {
  for (auto& v : g.values()) v = static_cast<double>(static_cast<float>(v));
  return g;
}

Sample random_sample(std::size_t k, std::size_t n = 128) {
  Sample s;
  s.id = sample_id("scene", k, Flip::kNone);
  s.scenario = "scene";
  s.spec = PatchSpec{k, 0, 1, 1, n, Flip::kNone};
  s.channels = {to_f32(random_grid(n, n, 3 * k + 1)),
                random_grid(n, n, 3 * k + 2, GridKind::kLosMask),
                random_grid(n, n, 3 * k + 3, GridKind::kBuildingMask)};
  s.target = to_f32(random_grid(n, n, 1000 + k));
  return s;
}

DatasetManifest small_manifest() {
  DatasetManifest m;
  m.normalization["pathloss"] = {80.0, 160.0};
  m.normalization["log_distance"] = {20.0, 55.0};
  m.split.train = {"scene"};
  m.seeds["run"] = 42;
  m.metadata["model"] = "ci";
  m.config_hash = "00ff";
  ScenarioRecord r;
  r.id = "scene";
  r.city = "town";
  r.rows = 256;
  r.cols = 384;
  r.patches = {PatchSpec{}, PatchSpec{0, 128, 2, 1}};
  m.scenarios.push_back(r);
  return m;
}

void write_bytes(const std::filesystem::path& p, const std::vector<std::uint8_t>& b) {
  std::ofstream(p, std::ios::binary).write(reinterpret_cast<const char*>(b.data()),
                                           static_cast<std::streamsize>(b.size()));
}

}  // namespace

TEST_CASE("sample encoding layout") {
  const Sample s = random_sample(0, 4);
  const auto bytes = encode_sample(s);
  REQUIRE(bytes.size() == 16 + 4 * 4 * 4 * 4 + 4);
  CHECK(std::memcmp(bytes.data(), "RGRD", 4) == 0);
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 3);
  CHECK(bytes[8] == 4);
  CHECK(bytes[12] == 4);
  float first = 0.0f;
  std::memcpy(&first, bytes.data() + 16, 4);
  CHECK(static_cast<double>(first) == s.channels[0][0]);
  const std::uint32_t crc =
      static_cast<std::uint32_t>(::crc32(0L, bytes.data(), static_cast<uInt>(bytes.size() - 4)));
  std::uint32_t stored = 0;
  std::memcpy(&stored, bytes.data() + bytes.size() - 4, 4);
  CHECK(stored == crc);
  CHECK(crc32_of(std::span(bytes).first(bytes.size() - 4)) == crc);
}

TEST_CASE("manifest JSON round trip") {
  DatasetManifest m = small_manifest();
  m.files.push_back({"a.rgrd", "a", "scene", "train", PatchSpec{1, 2, 3, 1}, 77, 1234});
  const DatasetManifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.format_version == m.format_version);
  CHECK(back.channel_order == m.channel_order);
  CHECK(back.channel_kinds == m.channel_kinds);
  CHECK(back.normalization == m.normalization);
  CHECK(back.split.train == m.split.train);
  CHECK(back.scenarios == m.scenarios);
  CHECK(back.seeds == m.seeds);
  CHECK(back.metadata == m.metadata);
  CHECK(back.config_hash == m.config_hash);
  CHECK(back.files == m.files);
  CHECK_THROWS_AS(manifest_from_json("{not json"), FormatError);
  auto j = manifest_to_json(m);
  const auto pos = j.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  j.replace(pos, 19, "\"format_version\": 9");
  CHECK_THROWS_AS(manifest_from_json(j), VersionError);
}

TEST_CASE("write then read is lossless") {
  TempDir dir("io");
  std::vector<Sample> samples;
  for (std::size_t k = 0; k < 20; ++k) samples.push_back(random_sample(k));
  write_dataset(samples, small_manifest(), dir.path());
  CHECK(std::filesystem::exists(dir.path() / "manifest.json"));
  const Dataset ds = read_dataset(dir.path());
  REQUIRE(ds.samples.size() == samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) CHECK(ds.samples[k] == samples[k]);
  CHECK(ds.manifest.files.size() == 20);
  CHECK(ds.manifest.normalization == small_manifest().normalization);
}

TEST_CASE("empty dataset is valid") {
  TempDir dir("empty");
  write_dataset({}, small_manifest(), dir.path());
  const Dataset ds = read_dataset(dir.path());
  CHECK(ds.samples.empty());
  CHECK(ds.manifest.files.empty());
}

TEST_CASE("missing manifest is reported") {
  TempDir dir("nomanifest");
  CHECK_THROWS_AS(read_dataset(dir.path()), DatasetError);
}

TEST_CASE("corruption, truncation and version are distinct diagnostics") {
  TempDir dir("corrupt");
  const std::vector<Sample> samples{random_sample(0), random_sample(1)};
  write_dataset(samples, small_manifest(), dir.path());
  const DatasetManifest m = read_manifest(dir.path());
  const auto file = dir.path() / m.files[0].file;
  const auto original = read_file(file);

  SUBCASE("flipped byte names the file") {
    auto bytes = original;
    bytes[5000] ^= 0x10;
    write_bytes(file, bytes);
    try {
      (void)read_dataset(dir.path());
      FAIL("corruption not detected");
    } catch (const ChecksumError& e) {
      CHECK(std::string(e.what()).find(m.files[0].file) != std::string::npos);
    }
  }
  SUBCASE("truncated file") {
    auto bytes = original;
    bytes.resize(bytes.size() - 100);
    write_bytes(file, bytes);
    CHECK_THROWS_AS((void)read_dataset(dir.path()), TruncatedFileError);
  }
  SUBCASE("future version") {
    auto bytes = original;
    bytes[4] = 2;
    const std::uint32_t crc = crc32_of(std::span(bytes).first(bytes.size() - 4));
    std::memcpy(bytes.data() + bytes.size() - 4, &crc, 4);
    const std::array<GridKind, 3> kinds{GridKind::kNormalized, GridKind::kLosMask,
                                        GridKind::kBuildingMask};
    CHECK_THROWS_AS(decode_sample(bytes, "future.rgrd", kinds, GridKind::kNormalized),
                    VersionError);
  }
  SUBCASE("decode without an intact trailer") {
    auto bytes = original;
    bytes[1] = 'X';
    const std::array<GridKind, 3> kinds{GridKind::kNormalized, GridKind::kLosMask,
                                        GridKind::kBuildingMask};
    CHECK_THROWS_AS(decode_sample(bytes, "x", kinds, GridKind::kNormalized), ChecksumError);
    bytes = original;
    bytes.resize(20);
    CHECK_THROWS_AS(decode_sample(bytes, "x", kinds, GridKind::kNormalized),
                    TruncatedFileError);
  }
}

TEST_CASE("writer removes a stale manifest before writing") {
  TempDir dir("stale");
  write_dataset(std::vector<Sample>{random_sample(0)}, small_manifest(), dir.path());
  {
    DatasetWriter w(dir.path());
    w.add(random_sample(1), "train");
    CHECK_FALSE(std::filesystem::exists(dir.path() / "manifest.json"));
  }
  CHECK_THROWS_AS(read_manifest(dir.path()), DatasetError);
}
