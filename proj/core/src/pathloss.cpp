// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/pathloss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "radiogrid/error.hpp"
#include "radiogrid/log.hpp"
#include "radiogrid/rng.hpp"

namespace radiogrid::pathloss {

CarrierConfig::CarrierConfig(double frequency_ghz, double propagation_speed)
    : frequency_ghz_(frequency_ghz), speed_(propagation_speed) {
  if (!(frequency_ghz > 0.0) || !std::isfinite(frequency_ghz)) {
    throw ConfigError("carrier frequency must be finite and > 0 GHz");
  }
  if (!(propagation_speed > 0.0) || !std::isfinite(propagation_speed)) {
    throw ConfigError("propagation speed must be finite and > 0");
  }
  wavelength_ = speed_ / frequency_hz();
}

void CiModelParams::validate() const {
  if (!(d0 > 0.0)) throw ConfigError("CI reference distance d0 must be > 0");
  if (!(ple > 0.0) || !(los_ple > 0.0)) {
    throw ConfigError("CI pathloss exponents must be > 0");
  }
  if (!(shadow_sigma_db >= 0.0)) {
    throw ConfigError("CI shadow fading sigma must be >= 0");
  }
}

Band band_from_string(std::string_view name) {
  if (name == "28ghz" || name == "tr38900") return Band::kTr38900_28GHz;
  if (name == "5.9ghz" || name == "tr38901") return Band::kTr38901_5p9GHz;
  throw ConfigError("unknown band '" + std::string(name) +
                    "' (expected 28ghz or 5.9ghz)");
}

std::string_view to_string(Band band) noexcept {
  return band == Band::kTr38900_28GHz ? "28ghz" : "5.9ghz";
}

void ThreeGppParams::validate() const {
  if (!(h_tx > h_e) || !(h_rx > h_e)) {
    throw ConfigError("3GPP antenna heights must exceed the environment height h_e");
  }
}

void AbgParams::validate() const {
  for (const AbgTriple& t : {los, nlos}) {
    if (!std::isfinite(t.alpha) || !std::isfinite(t.beta) ||
        !std::isfinite(t.gamma)) {
      throw ConfigError("ABG parameters must be finite");
    }
  }
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::kCi: return "ci";
    case Provenance::kThreeGpp: return "3gpp";
    case Provenance::kAbg: return "abg";
    case Provenance::kExternal: return "external";
  }
  return "unknown";
}

ModelChoice model_from_string(std::string_view name) {
  if (name == "ci") return ModelChoice::kCi;
  if (name == "3gpp") return ModelChoice::kThreeGpp;
  if (name == "abg") return ModelChoice::kAbg;
  throw ConfigError("unknown model '" + std::string(name) +
                    "' (expected ci, 3gpp or abg)");
}

std::string_view to_string(ModelChoice m) noexcept {
  switch (m) {
    case ModelChoice::kCi: return "ci";
    case ModelChoice::kThreeGpp: return "3gpp";
    case ModelChoice::kAbg: return "abg";
  }
  return "unknown";
}

double fspl_at_reference(const CarrierConfig& cfg, double d0) {
  if (!(d0 > 0.0)) throw ConfigError("reference distance must be > 0");
  return 20.0 * std::log10(4.0 * std::numbers::pi * d0 / cfg.wavelength());
}

double ci_pathloss(double d, double d0, double exponent,
                   const CarrierConfig& cfg, double shadow_db) {
  if (d < d0) {
    log().warn("CI model: distance {} m below d0 = {} m, clamped", d, d0);
    d = d0;
  }
  return fspl_at_reference(cfg, d0) + 10.0 * exponent * std::log10(d / d0) +
         shadow_db;
}

double ci_pathloss(double d, const CiModelParams& params,
                   const CarrierConfig& cfg, double shadow_db) {
  return ci_pathloss(d, params.d0, params.ple, cfg, shadow_db);
}

double shadow_fading_db(const CiModelParams& params, std::string_view scenario_id,
                        std::size_t receiver_index) {
  if (params.shadow_sigma_db == 0.0) return 0.0;
  auto engine = keyed_engine(
      stream_key(params.rng_seed, stable_hash(scenario_id), receiver_index));
  std::normal_distribution<double> normal(0.0, params.shadow_sigma_db);
  return normal(engine);
}

double breakpoint_distance(const CarrierConfig& cfg, const ThreeGppParams& p) {
  p.validate();
  return 4.0 * (p.h_tx - p.h_e) * (p.h_rx - p.h_e) * cfg.frequency_hz() /
         cfg.propagation_speed();
}

DistanceValidity threegpp_validity(double d2d) noexcept {
  if (d2d < 10.0) return DistanceValidity::kBelowMinimum;
  if (d2d > 5000.0) return DistanceValidity::kBeyondMaximum;
  return DistanceValidity::kValid;
}

double threegpp_pl1(double d3d, const CarrierConfig& cfg) noexcept {
  return 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(cfg.frequency_ghz());
}

double threegpp_pl2(double d3d, const CarrierConfig& cfg, const ThreeGppParams& p) {
  const double bp = breakpoint_distance(cfg, p);
  const double dh = p.h_tx - p.h_rx;
  return 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(cfg.frequency_ghz()) -
         9.5 * std::log10(bp * bp + dh * dh);
}

double threegpp_los(double d2d, double d3d, const CarrierConfig& cfg,
                    const ThreeGppParams& p) {
  if (d2d <= breakpoint_distance(cfg, p)) return threegpp_pl1(d3d, cfg);
  return threegpp_pl2(d3d, cfg, p);
}

double threegpp_nlos_prime(double d3d, const CarrierConfig& cfg,
                           const ThreeGppParams& p) {
  const double lf = std::log10(cfg.frequency_ghz());
  const double ld = std::log10(d3d);
  switch (p.band_variant) {
    case Band::kTr38900_28GHz:
      return 13.54 + 39.08 * ld + 20.0 * lf - 0.6 * (p.h_rx - 1.5);
    case Band::kTr38901_5p9GHz:
      return 22.4 + 35.3 * ld + 21.3 * lf - 0.3 * (p.h_rx - 1.5);
  }
  return 0.0;
}

double threegpp_nlos(double d2d, double d3d, const CarrierConfig& cfg,
                     const ThreeGppParams& p) {
  return std::max(threegpp_los(d2d, d3d, cfg, p), threegpp_nlos_prime(d3d, cfg, p));
}

double threegpp_breakpoint_gap(const CarrierConfig& cfg, const ThreeGppParams& p) {
  const double bp = breakpoint_distance(cfg, p);
  const double dh = p.h_tx - p.h_rx;
  const double d3d = std::sqrt(bp * bp + dh * dh);
  return std::fabs(threegpp_pl1(d3d, cfg) - threegpp_pl2(d3d, cfg, p));
}

double abg_pathloss(double d3d, const CarrierConfig& cfg, const AbgParams& p,
                    bool los) {
  if (!(d3d > 0.0)) throw ConfigError("ABG model needs d3d > 0");
  const AbgTriple& t = los ? p.los : p.nlos;
  return 10.0 * t.alpha * std::log10(d3d) + t.beta +
         10.0 * t.gamma * std::log10(cfg.frequency_ghz());
}

double model_pathloss(const ModelSet& models, const CarrierConfig& cfg,
                      double h_tx, double h_rx, double d2d, double d3d, bool los,
                      double shadow_db) {
  switch (models.choice) {
    case ModelChoice::kCi:
      return los ? ci_pathloss(d3d, models.ci.d0, models.ci.los_ple, cfg, 0.0)
                 : ci_pathloss(d3d, models.ci, cfg, shadow_db);
    case ModelChoice::kThreeGpp: {
      const ThreeGppParams p{h_tx, h_rx, models.h_e, models.band};
      return los ? threegpp_los(d2d, d3d, cfg, p) : threegpp_nlos(d2d, d3d, cfg, p);
    }
    case ModelChoice::kAbg:
      return abg_pathloss(d3d, cfg, models.abg, los);
  }
  return 0.0;
}

PathlossMap assemble_pathloss_map(const geometry::TransmitterScenario& scenario,
                                  const FeatureGrid& los_mask,
                                  const FeatureGrid& building_mask,
                                  const ModelSet& models,
                                  const PathlossMap* external) {
  scenario.validate();
  models.ci.validate();
  models.abg.validate();
  const auto& grid = scenario.grid;
  const FeatureGrid shape(grid.rows, grid.cols, GridKind::kPathloss);
  require_same_shape(shape, los_mask, "assemble_pathloss_map (LOS mask)");
  require_same_shape(shape, building_mask, "assemble_pathloss_map (building mask)");
  if (external != nullptr) {
    require_same_shape(shape, external->grid, "assemble_pathloss_map (external map)");
  }
  if (models.choice == ModelChoice::kThreeGpp) {
    ThreeGppParams{scenario.tx.z, grid.rx_height, models.h_e, models.band}.validate();
  }

  const CarrierConfig cfg(scenario.carrier_frequency_ghz, models.propagation_speed);
  std::vector<double> values(grid.size());
  std::size_t out_of_range = 0;
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const std::size_t i = r * grid.cols + c;
      const geometry::Point3 rx = grid.point(r, c);
      const double d2d = std::hypot(rx.x - scenario.tx.x, rx.y - scenario.tx.y);
      const double d3d = geometry::distance(scenario.tx, rx);
      const bool los = los_mask[i] != 0.0;
      double value;
      if (external != nullptr) {
        value = external->grid[i];
        if (!los) {
          const double shadow = shadow_fading_db(models.ci, scenario.id, i);
          value = std::min(value, ci_pathloss(d3d, models.ci, cfg, shadow));
        }
      } else {
        const double shadow = (!los && models.choice == ModelChoice::kCi)
                                  ? shadow_fading_db(models.ci, scenario.id, i)
                                  : 0.0;
        value = model_pathloss(models, cfg, scenario.tx.z, grid.rx_height, d2d,
                               d3d, los, shadow);
        if (models.choice == ModelChoice::kThreeGpp &&
            threegpp_validity(d2d) != DistanceValidity::kValid) {
          ++out_of_range;
        }
      }
      if (building_mask[i] != 0.0) value += models.indoor_offset_db;
      values[i] = value;
    }
  }
  if (out_of_range > 0) {
    log().info("scenario '{}': {} receivers outside the 3GPP 10 m - 5 km range",
               scenario.id, out_of_range);
  }
  PathlossMap out;
  out.grid = FeatureGrid(grid.rows, grid.cols, GridKind::kPathloss, std::move(values));
  out.provenance = external != nullptr ? Provenance::kExternal
                   : models.choice == ModelChoice::kCi     ? Provenance::kCi
                   : models.choice == ModelChoice::kThreeGpp ? Provenance::kThreeGpp
                                                             : Provenance::kAbg;
  return out;
}

PathlossMap smooth_map(const PathlossMap& map) {
  const FeatureGrid& in = map.grid;
  const std::size_t rows = in.rows();
  const std::size_t cols = in.cols();
  std::vector<double> out(in.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double sum = in(r, c);
      int count = 1;
      if (r > 0) { sum += in(r - 1, c); ++count; }
      if (r + 1 < rows) { sum += in(r + 1, c); ++count; }
      if (c > 0) { sum += in(r, c - 1); ++count; }
      if (c + 1 < cols) { sum += in(r, c + 1); ++count; }
      out[r * cols + c] = sum / count;
    }
  }
  return {FeatureGrid(rows, cols, in.kind(), std::move(out)), map.provenance};
}

}  // namespace radiogrid::pathloss
