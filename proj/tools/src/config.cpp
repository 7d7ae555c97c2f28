// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <sstream>
#include <toml.hpp>

#include "radiogrid/error.hpp"
#include "radiogrid/rng.hpp"

namespace radiogrid::cli {
namespace {

using nlohmann::json;

// Key lookup with a dotted path for diagnostics.
class Section {
 public:
  Section(const toml::table* table, std::string path)
      : table_(table), path_(std::move(path)) {}

  bool has(std::string_view key) const {
    return table_ != nullptr && table_->contains(key);
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    if (table_ == nullptr) return;
    for (const auto& [key, node] : *table_) {
      bool known = false;
      for (std::string_view k : keys) known = known || k == key.str();
      if (!known) throw ConfigError("unknown config key '" + where(key.str()) + "'");
    }
  }

  double number(std::string_view key, double fallback) const {
    const toml::node* n = node(key);
    if (n == nullptr) return fallback;
    if (auto v = n->value<double>()) return *v;
    throw ConfigError("'" + where(key) + "' must be a number");
  }

  std::int64_t integer(std::string_view key, std::int64_t fallback) const {
    const toml::node* n = node(key);
    if (n == nullptr) return fallback;
    if (n->is_integer()) return *n->value<std::int64_t>();
    throw ConfigError("'" + where(key) + "' must be an integer");
  }

  std::size_t count(std::string_view key, std::size_t fallback) const {
    const std::int64_t v = integer(key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw ConfigError("'" + where(key) + "' must be >= 0");
    return static_cast<std::size_t>(v);
  }

  std::string string(std::string_view key, std::string fallback) const {
    const toml::node* n = node(key);
    if (n == nullptr) return fallback;
    if (auto v = n->value<std::string>()) return *v;
    throw ConfigError("'" + where(key) + "' must be a string");
  }

  bool boolean(std::string_view key, bool fallback) const {
    const toml::node* n = node(key);
    if (n == nullptr) return fallback;
    if (auto v = n->value<bool>()) return *v;
    throw ConfigError("'" + where(key) + "' must be true or false");
  }

  std::vector<double> numbers(std::string_view key) const {
    std::vector<double> out;
    const toml::node* n = node(key);
    if (n == nullptr) return out;
    const toml::array* arr = n->as_array();
    if (arr == nullptr) throw ConfigError("'" + where(key) + "' must be an array");
    for (const toml::node& item : *arr) {
      auto v = item.value<double>();
      if (!v) throw ConfigError("'" + where(key) + "' must hold numbers");
      out.push_back(*v);
    }
    return out;
  }

  std::vector<std::string> strings(std::string_view key) const {
    std::vector<std::string> out;
    const toml::node* n = node(key);
    if (n == nullptr) return out;
    const toml::array* arr = n->as_array();
    if (arr == nullptr) throw ConfigError("'" + where(key) + "' must be an array");
    for (const toml::node& item : *arr) {
      auto v = item.value<std::string>();
      if (!v) throw ConfigError("'" + where(key) + "' must hold strings");
      out.push_back(*v);
    }
    return out;
  }

  Section sub(std::string_view key) const {
    const toml::node* n = node(key);
    if (n != nullptr && !n->is_table()) {
      throw ConfigError("'" + where(key) + "' must be a table");
    }
    return Section(n == nullptr ? nullptr : n->as_table(), where(key));
  }

  std::vector<Section> array_of_tables(std::string_view key) const {
    std::vector<Section> out;
    const toml::node* n = node(key);
    if (n == nullptr) return out;
    const toml::array* arr = n->as_array();
    if (arr == nullptr) throw ConfigError("'" + where(key) + "' must be an array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const toml::table* t = (*arr)[i].as_table();
      if (t == nullptr) throw ConfigError("'" + where(key) + "' must be an array of tables");
      out.emplace_back(t, where(key) + "[" + std::to_string(i) + "]");
    }
    return out;
  }

 private:
  const toml::node* node(std::string_view key) const {
    return table_ == nullptr ? nullptr : table_->get(key);
  }
  std::string where(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const toml::table* table_;
  std::string path_;
};

toml::table parse_toml(std::string_view text, std::string_view what) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << what << ": " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(msg.str());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

pathloss::AbgTriple read_triple(const Section& s, pathloss::AbgTriple fallback) {
  s.allow_only({"alpha", "beta", "gamma"});
  return {s.number("alpha", fallback.alpha), s.number("beta", fallback.beta),
          s.number("gamma", fallback.gamma)};
}

void read_models(const Section& s, pathloss::ModelSet& m) {
  const Section ci = s.sub("ci");
  ci.allow_only({"d0", "ple", "los_ple", "shadow_sigma_db", "seed"});
  m.ci.d0 = ci.number("d0", m.ci.d0);
  m.ci.ple = ci.number("ple", m.ci.ple);
  m.ci.los_ple = ci.number("los_ple", m.ci.los_ple);
  m.ci.shadow_sigma_db = ci.number("shadow_sigma_db", m.ci.shadow_sigma_db);
  m.ci.rng_seed = static_cast<std::uint64_t>(
      ci.integer("seed", static_cast<std::int64_t>(m.ci.rng_seed)));
  const Section g = s.sub("threegpp");
  g.allow_only({"h_e"});
  m.h_e = g.number("h_e", m.h_e);
  const Section abg = s.sub("abg");
  abg.allow_only({"28ghz", "5.9ghz"});
  const pathloss::Band band = m.band;
  const Section chosen = abg.sub(pathloss::to_string(band));
  chosen.allow_only({"los", "nlos"});
  m.abg.los = read_triple(chosen.sub("los"), m.abg.los);
  m.abg.nlos = read_triple(chosen.sub("nlos"), m.abg.nlos);
}

}  // namespace

std::string_view to_string(PatchMode mode) noexcept {
  switch (mode) {
    case PatchMode::kStructured: return "structured";
    case PatchMode::kRandom: return "random";
    case PatchMode::kQuadrants: return "quadrants";
  }
  return "structured";
}

PatchMode patch_mode_from_string(std::string_view name) {
  if (name == "structured") return PatchMode::kStructured;
  if (name == "random") return PatchMode::kRandom;
  if (name == "quadrants") return PatchMode::kQuadrants;
  throw ConfigError("unknown patch mode '" + std::string(name) +
                    "' (expected structured, random or quadrants)");
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) out[i] = kDigits[value & 0xF];
  return out;
}

void parse_model_file(std::string_view toml_text, pathloss::ModelSet& models) {
  const toml::table root = parse_toml(toml_text, "model file");
  const Section s(&root, "");
  s.allow_only({"ci", "threegpp", "abg", "indoor_offset_db"});
  models.indoor_offset_db = s.number("indoor_offset_db", models.indoor_offset_db);
  models.abg = pathloss::AbgParams::for_band(models.band);
  read_models(s, models);
}

RunConfig parse_run_config(std::string_view toml_text,
                           const std::filesystem::path& base_dir) {
  const toml::table root = parse_toml(toml_text, "run config");
  const Section s(&root, "");
  s.allow_only({"name", "seed", "threads", "output", "export_npy", "model_file", "grid",
                "carrier", "model", "patches", "split", "environments"});
  RunConfig c;
  c.name = s.string("name", c.name);
  c.seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  c.threads = static_cast<unsigned>(s.count("threads", 0));
  c.output = resolve(base_dir, s.string("output", c.output.string()));
  c.export_npy = s.boolean("export_npy", false);

  const Section grid = s.sub("grid");
  grid.allow_only({"rows", "cols", "origin", "spacing", "rx_height"});
  c.grid.rows = grid.count("rows", c.grid.rows);
  c.grid.cols = grid.count("cols", c.grid.cols);
  if (const auto o = grid.numbers("origin"); !o.empty()) {
    if (o.size() != 2) throw ConfigError("'grid.origin' needs [x, y]");
    c.grid.origin = {o[0], o[1]};
  }
  if (const auto sp = grid.numbers("spacing"); !sp.empty()) {
    if (sp.size() != 2) throw ConfigError("'grid.spacing' needs [dx, dy]");
    c.grid.spacing_x = sp[0];
    c.grid.spacing_y = sp[1];
  }
  c.grid.rx_height = grid.number("rx_height", c.grid.rx_height);

  const Section carrier = s.sub("carrier");
  carrier.allow_only({"frequency_ghz", "tx_power_dbm", "propagation_speed"});
  c.frequency_ghz = carrier.number("frequency_ghz", c.frequency_ghz);
  c.tx_power_dbm = carrier.number("tx_power_dbm", c.tx_power_dbm);
  c.models.propagation_speed =
      carrier.number("propagation_speed", c.models.propagation_speed);

  const Section model = s.sub("model");
  model.allow_only({"choice", "band", "indoor_offset_db", "smoothing", "ci", "threegpp", "abg"});
  c.models.choice = pathloss::model_from_string(model.string("choice", "ci"));
  c.models.band = pathloss::band_from_string(model.string("band", "28ghz"));
  c.models.abg = pathloss::AbgParams::for_band(c.models.band);
  if (s.has("model_file")) {
    const auto path = resolve(base_dir, s.string("model_file", ""));
    parse_model_file(read_text(path), c.models);
  }
  c.models.indoor_offset_db = model.number("indoor_offset_db", c.models.indoor_offset_db);
  c.smoothing = model.boolean("smoothing", false);
  read_models(model, c.models);

  const Section patches = s.sub("patches");
  patches.allow_only({"mode", "random_count", "augment"});
  c.patches.mode = patch_mode_from_string(patches.string("mode", "structured"));
  c.patches.random_count = patches.count("random_count", c.patches.random_count);
  c.patches.augment = patches.boolean("augment", true);

  const Section split = s.sub("split");
  split.allow_only({"mode", "test_transmitters", "holdout_city"});
  c.split.mode = dataset::split_mode_from_string(split.string("mode", "per_transmitter"));
  if (split.has("test_transmitters")) {
    c.split.test_transmitters.clear();
    for (double v : split.numbers("test_transmitters")) {
      if (v < 0 || v != std::floor(v)) {
        throw ConfigError("'split.test_transmitters' must hold indices");
      }
      c.split.test_transmitters.push_back(static_cast<std::size_t>(v));
    }
  }
  c.split.holdout_city = split.string("holdout_city", "");

  for (const Section& e : s.array_of_tables("environments")) {
    e.allow_only({"name", "city", "path", "synthetic_buildings", "synthetic_seed",
                  "transmitters", "auto_transmitters", "altitudes"});
    EnvironmentConfig env;
    env.name = e.string("name", "env" + std::to_string(c.environments.size()));
    env.city = e.string("city", env.name);
    if (e.has("path")) env.path = resolve(base_dir, e.string("path", ""));
    env.synthetic_buildings = e.count("synthetic_buildings", 0);
    env.synthetic_seed = static_cast<std::uint64_t>(e.integer("synthetic_seed", 0));
    if (env.path && env.synthetic_buildings > 0) {
      throw ConfigError("environment '" + env.name +
                        "': give either path or synthetic_buildings, not both");
    }
    for (const Section& t : e.array_of_tables("transmitters")) {
      t.allow_only({"position", "altitudes", "external_maps"});
      TransmitterConfig tx;
      if (const auto p = t.numbers("position"); !p.empty()) {
        if (p.size() != 2) throw ConfigError("transmitter position needs [x, y]");
        tx.position = geometry::Vec2{p[0], p[1]};
      }
      tx.altitudes = t.numbers("altitudes");
      if (tx.altitudes.empty()) tx.altitudes = e.numbers("altitudes");
      for (const std::string& m : t.strings("external_maps")) {
        tx.external_maps.push_back(resolve(base_dir, m));
      }
      env.transmitters.push_back(std::move(tx));
    }
    const std::size_t automatic = e.count("auto_transmitters", 0);
    for (std::size_t i = 0; i < automatic; ++i) {
      env.transmitters.push_back({std::nullopt, e.numbers("altitudes"), {}});
    }
    c.environments.push_back(std::move(env));
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text(path), path.parent_path());
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.band) {
    c.models.band = pathloss::band_from_string(*o.band);
    c.models.abg = pathloss::AbgParams::for_band(c.models.band);
  }
  if (o.model) c.models.choice = pathloss::model_from_string(*o.model);
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (o.output) c.output = *o.output;
}

void RunConfig::validate() const {
  grid.validate();
  models.ci.validate();
  models.abg.validate();
  if (!(frequency_ghz > 0.0)) throw ConfigError("carrier frequency must be > 0 GHz");
  if (environments.empty()) throw ConfigError("config lists no environments");
  switch (patches.mode) {
    case PatchMode::kStructured:
      if (grid.rows != 256 || grid.cols != 384) {
        throw ConfigError("structured patches need a 256x384 grid");
      }
      break;
    case PatchMode::kQuadrants:
      if (grid.rows != 256 || grid.cols != 256) {
        throw ConfigError("quadrant patches need a 256x256 grid");
      }
      break;
    case PatchMode::kRandom:
      if (grid.rows < dataset::kPatchSize || grid.cols < dataset::kPatchSize) {
        throw ConfigError("random patches need a grid of at least 128x128");
      }
      break;
  }
  for (const EnvironmentConfig& e : environments) {
    if (e.path && !std::filesystem::exists(*e.path)) {
      throw ConfigError("environment '" + e.name + "': file " + e.path->string() +
                        " does not exist");
    }
    if (e.transmitters.empty()) {
      throw ConfigError("environment '" + e.name + "' has no transmitters");
    }
    for (const TransmitterConfig& t : e.transmitters) {
      if (t.altitudes.empty()) {
        throw ConfigError("environment '" + e.name + "': transmitter without altitudes");
      }
      for (double a : t.altitudes) {
        if (!(a > grid.rx_height)) {
          throw ConfigError("environment '" + e.name + "': altitude " + std::to_string(a) +
                            " m does not exceed the receiver height");
        }
      }
      if (!t.external_maps.empty() && t.external_maps.size() != t.altitudes.size()) {
        throw ConfigError("environment '" + e.name +
                          "': external_maps needs one file per altitude");
      }
      for (const auto& m : t.external_maps) {
        if (!std::filesystem::exists(m)) {
          throw ConfigError("external map " + m.string() + " does not exist");
        }
      }
    }
  }
}

std::string RunConfig::to_json() const {
  json j;
  j["name"] = name;
  j["seed"] = seed;
  j["export_npy"] = export_npy;
  j["grid"] = {{"rows", grid.rows},
               {"cols", grid.cols},
               {"origin", {grid.origin.x, grid.origin.y}},
               {"spacing", {grid.spacing_x, grid.spacing_y}},
               {"rx_height", grid.rx_height}};
  j["carrier"] = {{"frequency_ghz", frequency_ghz},
                  {"tx_power_dbm", tx_power_dbm},
                  {"propagation_speed", models.propagation_speed}};
  j["model"] = {
      {"choice", std::string(pathloss::to_string(models.choice))},
      {"band", std::string(pathloss::to_string(models.band))},
      {"indoor_offset_db", models.indoor_offset_db},
      {"smoothing", smoothing},
      {"ci",
       {{"d0", models.ci.d0},
        {"ple", models.ci.ple},
        {"los_ple", models.ci.los_ple},
        {"shadow_sigma_db", models.ci.shadow_sigma_db},
        {"seed", models.ci.rng_seed}}},
      {"h_e", models.h_e},
      {"abg",
       {{"los", {models.abg.los.alpha, models.abg.los.beta, models.abg.los.gamma}},
        {"nlos", {models.abg.nlos.alpha, models.abg.nlos.beta, models.abg.nlos.gamma}}}}};
  j["patches"] = {{"mode", std::string(to_string(patches.mode))},
                  {"random_count", patches.random_count},
                  {"augment", patches.augment}};
  j["split"] = {{"mode", std::string(dataset::to_string(split.mode))},
                {"test_transmitters", split.test_transmitters},
                {"holdout_city", split.holdout_city}};
  json envs = json::array();
  for (const EnvironmentConfig& e : environments) {
    json txs = json::array();
    for (const TransmitterConfig& t : e.transmitters) {
      json tj = {{"altitudes", t.altitudes}};
      if (t.position) tj["position"] = {t.position->x, t.position->y};
      json maps = json::array();
      for (const auto& m : t.external_maps) maps.push_back(m.filename().string());
      tj["external_maps"] = maps;
      txs.push_back(tj);
    }
    json ej = {{"name", e.name},
               {"city", e.city},
               {"synthetic_buildings", e.synthetic_buildings},
               {"synthetic_seed", e.synthetic_seed},
               {"transmitters", txs}};
    if (e.path) ej["path"] = e.path->filename().string();
    envs.push_back(ej);
  }
  j["environments"] = envs;
  return j.dump();
}

std::string RunConfig::hash() const { return hex64(stable_hash(to_json())); }

}  // namespace radiogrid::cli
