// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "radiogrid/channels.hpp"
#include "radiogrid/error.hpp"
#include "radiogrid/npy.hpp"
#include "radiogrid_cli/commands.hpp"
#include "radiogrid_cli/config.hpp"
#include "test_support.hpp"

using namespace radiogrid;
using namespace radiogrid::cli;
using radiogrid::testing::TempDir;

namespace {

constexpr const char* kSmall = R"(
name = "unit"
seed = 5
threads = 1

[grid]
rows = 128
cols = 160
spacing = [2.0, 2.0]

[model]
choice = "3gpp"

[patches]
mode = "random"
random_count = 3

[split]
test_transmitters = [1]

[[environments]]
name = "a"
synthetic_buildings = 12
synthetic_seed = 3
auto_transmitters = 2
altitudes = [30.0]
)";

RunConfig small_config(const std::filesystem::path& out) {
  RunConfig c = parse_run_config(kSmall, out.parent_path());
  c.output = out;
  return c;
}

std::map<std::string, std::vector<std::uint8_t>> tree(const std::filesystem::path& dir) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      out[std::filesystem::relative(e.path(), dir).string()] = dataset::read_file(e.path());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("config defaults mirror the simulation table") {
  const RunConfig c = parse_run_config(R"(
[[environments]]
name = "empty"
auto_transmitters = 1
altitudes = [25.0]
)", ".");
  CHECK(c.grid.rows == 256);
  CHECK(c.grid.cols == 384);
  CHECK(c.grid.rx_height == 1.5);
  CHECK(c.frequency_ghz == 28.0);
  CHECK(c.tx_power_dbm == 30.0);
  CHECK(c.models.h_e == 1.0);
  CHECK(c.models.ci.ple == 3.0);
  CHECK(c.models.ci.shadow_sigma_db == 6.8);
  CHECK(c.patches.random_count == 82);
}

TEST_CASE("config errors are reported") {
  CHECK_THROWS_AS(parse_run_config("bogus = 1\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[grid]\nrowz = 3\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_run_config("name = \n", "."), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"(
[[environments]]
name = "x"
path = "does/not/exist.json"
auto_transmitters = 1
altitudes = [25.0]
)", ".").validate(), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"(
[[environments]]
name = "x"
auto_transmitters = 1
altitudes = [1.0]
)", ".").validate(), Error);
}

TEST_CASE("overrides and hashing") {
  TempDir dir("cfg");
  RunConfig c = small_config(dir / "out");
  const std::string h = c.hash();
  CHECK(h.size() == 16);
  apply_overrides(c, {"abg", "5.9ghz", 99, 2, dir / "other"});
  CHECK(c.models.choice == pathloss::ModelChoice::kAbg);
  CHECK(c.models.band == pathloss::Band::kTr38901_5p9GHz);
  CHECK(c.models.abg.nlos.alpha == 5.06);
  CHECK(c.seed == 99);
  CHECK(c.threads == 2);
  CHECK(c.hash() != h);
  RunConfig d = small_config(dir / "elsewhere");
  d.threads = 4;
  CHECK(d.hash() == h);
  CHECK_THROWS_AS(apply_overrides(c, {"hata", {}, {}, {}, {}}), ConfigError);
}

TEST_CASE("model file sets the ABG table") {
  pathloss::ModelSet m;
  parse_model_file(R"(
[abg."28ghz".los]
alpha = 2.0
beta = 30.0
gamma = 2.0
)", m);
  CHECK(m.abg.los.alpha == 2.0);
  CHECK(m.abg.nlos.alpha == 4.39);
}

TEST_CASE("scenario batch") {
  TempDir dir("batch");
  const ScenarioBatch b = build_scenarios(small_config(dir / "out"));
  REQUIRE(b.scenarios.size() == 2);
  CHECK(b.scenarios[0].id == "a-tx0-h30");
  CHECK(b.scenarios[1].id == "a-tx1-h30");
  for (const auto& s : b.scenarios) {
    CHECK_FALSE(geometry::point_in_building(s.spec.tx.xy(), b.environments[0]));
  }
}

TEST_CASE("los command writes one mask per scenario") {
  TempDir dir("los");
  RunConfig c = small_config(dir / "out");
  c.environments[0].synthetic_buildings = 0;
  std::ostringstream out;
  CHECK(cmd_los(c, out) == 0);
  const FeatureGrid m = npy::load(dir / "out/los/a-tx0-h30.npy", GridKind::kLosMask);
  CHECK(m.rows() == 128);
  for (double v : m.values()) CHECK(v == 1.0);
  CHECK(out.str().find("a-tx1-h30") != std::string::npos);
}

TEST_CASE("los command continues past unreadable environments") {
  TempDir dir("losbad");
  RunConfig c = small_config(dir / "out");
  EnvironmentConfig broken = c.environments[0];
  broken.name = "broken";
  broken.synthetic_buildings = 0;
  broken.path = dir / "broken.json";
  std::ofstream(*broken.path) << "{\"buildings\": 3}";
  c.environments.push_back(broken);
  std::ostringstream out;
  CHECK(cmd_los(c, out) == 1);
  CHECK(std::filesystem::exists(dir / "out/los/a-tx1-h30.npy"));
}

TEST_CASE("generate, rerun and dry run") {
  TempDir dir("gen");
  std::ostringstream out;
  const RunConfig c = small_config(dir / "a");
  const GenerateResult r = cmd_generate(c, false, out);
  CHECK(r.samples == 2 * 3 * 3);
  const dataset::Dataset ds = dataset::read_dataset(dir / "a");
  CHECK(ds.samples.size() == 18);
  CHECK(ds.manifest.config_hash == c.hash());
  std::size_t test = 0;
  for (const auto& f : ds.manifest.files) test += f.split == "test";
  CHECK(test == 9);

  RunConfig again = small_config(dir / "b");
  again.threads = 3;
  cmd_generate(again, false, out);
  CHECK(tree(dir / "a") == tree(dir / "b"));

  std::ostringstream preview;
  const GenerateResult dry = cmd_generate(small_config(dir / "c"), true, preview);
  CHECK(dry.samples == 18);
  CHECK_FALSE(std::filesystem::exists(dir / "c"));
  CHECK(preview.str().find("dry run: 2 scenarios, 18 samples") != std::string::npos);
}

TEST_CASE("perturb") {
  TempDir dir("perturb");
  std::ostringstream out;
  cmd_generate(small_config(dir / "base"), false, out);
  const auto base = dataset::read_dataset(dir / "base");

  SUBCASE("level zero copies the samples") {
    cmd_perturb({dir / "base", dir / "zero", "los", 0.0, 0.1, 1}, out);
    const auto z = dataset::read_dataset(dir / "zero");
    CHECK(z.samples == base.samples);
    CHECK(z.manifest.metadata.at("perturbation") == "los:0");
  }
  SUBCASE("mask flips touch test samples only, by exact counts") {
    cmd_perturb({dir / "base", dir / "flip", "los", 10.0, 0.1, 1}, out);
    const auto f = dataset::read_dataset(dir / "flip");
    for (std::size_t k = 0; k < base.samples.size(); ++k) {
      std::size_t diff = 0;
      for (std::size_t i = 0; i < 128 * 128; ++i) {
        diff += base.samples[k].channels[1][i] != f.samples[k].channels[1][i];
      }
      const bool is_test = base.manifest.files[k].split == "test";
      CHECK(diff == (is_test ? 1638u : 0u));
      CHECK(f.samples[k].channels[0] == base.samples[k].channels[0]);
      CHECK(f.samples[k].target == base.samples[k].target);
    }
  }
  SUBCASE("far-field distance noise leaves near pixels untouched") {
    cmd_perturb({dir / "base", dir / "far", "distance-far", 10.0, 0.1, 2}, out);
    const auto f = dataset::read_dataset(dir / "far");
    const auto stats = base.manifest.normalization.at("log_distance");
    const double near_limit =
        (20.0 * std::log10(channels::kNearFieldLimit) - stats.min) / (stats.max - stats.min);
    std::size_t changed = 0;
    for (std::size_t k = 0; k < base.samples.size(); ++k) {
      const auto& a = base.samples[k].channels[0];
      const auto& b = f.samples[k].channels[0];
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < near_limit - 1e-6) {
          CHECK(std::bit_cast<std::uint64_t>(a[i]) == std::bit_cast<std::uint64_t>(b[i]));
        }
        changed += a[i] != b[i];
      }
    }
    CHECK(changed > 0);
  }
  CHECK_THROWS_AS(cmd_perturb({dir / "base", dir / "x", "gamma", 10.0, 0.1, 1}, out),
                  ConfigError);
  CHECK_THROWS_AS(cmd_perturb({dir / "base", dir / "x", "los", 150.0, 0.1, 1}, out),
                  ConfigError);
  CHECK_THROWS_AS(cmd_perturb({dir / "base", dir / "base", "los", 5.0, 0.1, 1}, out),
                  ConfigError);
}

TEST_CASE("evaluate predictions and empirical models") {
  TempDir dir("eval");
  std::ostringstream out;
  cmd_generate(small_config(dir / "ds"), false, out);
  const auto ds = dataset::read_dataset(dir / "ds");
  const auto stats = ds.manifest.normalization.at("pathloss");
  std::filesystem::create_directories(dir / "same");
  std::filesystem::create_directories(dir / "plus1");
  for (std::size_t k = 0; k < ds.samples.size(); ++k) {
    const auto& s = ds.samples[k];
    npy::save(dir / "same" / (s.id + ".npy"), s.target);
    FeatureGrid up = channels::denormalize(s.target, stats, GridKind::kPathloss);
    for (auto& v : up.values()) v += 1.0;
    if (k != 0) {
      npy::save(dir / "plus1" / (s.id + ".npy"),
                channels::normalize(up, stats).grid.relabeled(GridKind::kNormalized));
    }
  }

  EvaluateOptions o;
  o.dataset = dir / "ds";
  o.split = "all";
  o.predictions = dir / "same";
  const auto zero = cmd_evaluate(o, out);
  CHECK(zero.overall.rmse_db == 0.0);
  CHECK(zero.overall.mae_db == 0.0);
  CHECK(zero.n_samples == 18);

  o.predictions = dir / "plus1";
  o.report_json = dir / "report.json";
  const auto one = cmd_evaluate(o, out);
  CHECK(one.n_samples == 17);
  // Float32 storage bounds the deviation from exactly 1 dB.
  CHECK(one.overall.rmse_db == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(one.overall.mae_db == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::filesystem::exists(dir / "report.json"));

  EvaluateOptions m;
  m.dataset = dir / "ds";
  m.model = pathloss::ModelChoice::kThreeGpp;
  std::ostringstream table;
  const auto rep = cmd_evaluate(m, table);
  CHECK(rep.n_samples == 9);
  CHECK(std::isfinite(rep.overall.rmse_db));
  CHECK(table.str().find("RMSE (dB)") != std::string::npos);

  EvaluateOptions both = m;
  both.predictions = dir / "same";
  CHECK_THROWS_AS(cmd_evaluate(both, out), ConfigError);
}

TEST_CASE("empirical prediction undoes flips") {
  TempDir dir("flipeval");
  std::ostringstream out;
  cmd_generate(small_config(dir / "ds"), false, out);
  const auto ds = dataset::read_dataset(dir / "ds");
  pathloss::ModelSet models;
  models.choice = pathloss::ModelChoice::kAbg;
  const auto* sc = ds.manifest.find_scenario(ds.samples[0].scenario);
  REQUIRE(sc != nullptr);
  const auto base = empirical_prediction(*sc, ds.samples[0], models, 1);
  const auto h = empirical_prediction(*sc, ds.samples[1], models, 1);
  const auto v = empirical_prediction(*sc, ds.samples[2], models, 1);
  CHECK(h == dataset::apply_flip(base, dataset::Flip::kHorizontal));
  CHECK(v == dataset::apply_flip(base, dataset::Flip::kVertical));
}

TEST_CASE("bench compares filtered and brute-force paths") {
  geometry::Environment env("bench", {testing::box(10, 10, 30, 30, 20)});
  const geometry::ReceiverGridSpec grid{32, 48, {0, 0}, 1.5, 1.5, 1.5};
  const BenchRow row = bench_scene("bench", env, {60, 40, 25}, grid, 1, 1);
  CHECK(row.identical);
  CHECK(row.walls == 4);
  CHECK(row.receivers == grid.size());
  CHECK(row.facing_fraction() == doctest::Approx(0.5));
}
