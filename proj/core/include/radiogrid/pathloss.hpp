// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "radiogrid/feature_grid.hpp"
#include "radiogrid/geometry.hpp"

namespace radiogrid::pathloss {

inline constexpr double kSpeedOfLight = 299'792'458.0;
/// Propagation speed used by the 3GPP reports (and by default here).
inline constexpr double kNominalSpeedOfLight = 3.0e8;

class CarrierConfig {
 public:
  explicit CarrierConfig(double frequency_ghz,
                         double propagation_speed = kNominalSpeedOfLight);

  double frequency_ghz() const noexcept { return frequency_ghz_; }
  double frequency_hz() const noexcept { return frequency_ghz_ * 1e9; }
  double wavelength() const noexcept { return wavelength_; }
  double propagation_speed() const noexcept { return speed_; }

 private:
  double frequency_ghz_;
  double speed_;
  double wavelength_;
};

/// Close-In model parameters. `ple` is the NLOS exponent; LOS receivers use
/// `los_ple` with no shadow term.
struct CiModelParams {
  double d0 = 1.0;
  double ple = 3.0;
  double los_ple = 2.0;
  double shadow_sigma_db = 6.8;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

enum class Band { kTr38900_28GHz, kTr38901_5p9GHz };

Band band_from_string(std::string_view name);
std::string_view to_string(Band band) noexcept;

struct ThreeGppParams {
  double h_tx = 25.0;
  double h_rx = 1.5;
  double h_e = 1.0;
  Band band_variant = Band::kTr38900_28GHz;

  void validate() const;
};

struct AbgTriple {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct AbgParams {
  AbgTriple los;
  AbgTriple nlos;

  /// ITU-R P.1411 ABG triples used for the 28 GHz in-house maps.
  static AbgParams urban_28ghz() noexcept {
    return {{2.29, 28.6, 1.96}, {4.39, -6.27, 2.3}};
  }
  /// ABG triples used for the 5.9 GHz RadioMapSeer maps.
  static AbgParams radiomapseer_5p9ghz() noexcept {
    return {{2.12, 29.2, 2.11}, {5.06, -4.68, 2.02}};
  }
  static AbgParams for_band(Band band) noexcept {
    return band == Band::kTr38900_28GHz ? urban_28ghz() : radiomapseer_5p9ghz();
  }

  void validate() const;
};

enum class Provenance { kCi, kThreeGpp, kAbg, kExternal };
std::string_view to_string(Provenance p) noexcept;

struct PathlossMap {
  FeatureGrid grid;  // dB, kind kPathloss
  Provenance provenance = Provenance::kCi;
};

/// 20 log10(4 pi d0 / lambda).
double fspl_at_reference(const CarrierConfig& cfg, double d0);

/// FSPL(d0) + 10 n log10(d / d0) + shadow. Distances below d0 are clamped
/// to d0 with a warning.
double ci_pathloss(double d, const CiModelParams& params,
                   const CarrierConfig& cfg, double shadow_db);

/// CI with an explicit exponent; used for the LOS branch.
double ci_pathloss(double d, double d0, double exponent,
                   const CarrierConfig& cfg, double shadow_db);

/// Zero-mean normal draw with sigma = shadow_sigma_db, keyed by
/// (rng_seed, scenario id, receiver index).
double shadow_fading_db(const CiModelParams& params, std::string_view scenario_id,
                        std::size_t receiver_index);

/// 4 (h_tx - h_e)(h_rx - h_e) f_Hz / c.
double breakpoint_distance(const CarrierConfig& cfg, const ThreeGppParams& p);

enum class DistanceValidity { kValid, kBelowMinimum, kBeyondMaximum };

/// 3GPP LOS formulas are stated for 10 m <= d2d <= 5 km.
DistanceValidity threegpp_validity(double d2d) noexcept;

double threegpp_pl1(double d3d, const CarrierConfig& cfg) noexcept;
double threegpp_pl2(double d3d, const CarrierConfig& cfg, const ThreeGppParams& p);

/// PL1 up to the breakpoint, PL2 beyond. d2d below 10 m still uses PL1.
double threegpp_los(double d2d, double d3d, const CarrierConfig& cfg,
                    const ThreeGppParams& p);

/// Band-specific PL'_NLOS.
double threegpp_nlos_prime(double d3d, const CarrierConfig& cfg,
                           const ThreeGppParams& p);

/// max(PL_LOS, PL'_NLOS).
double threegpp_nlos(double d2d, double d3d, const CarrierConfig& cfg,
                     const ThreeGppParams& p);

/// |PL1 - PL2| evaluated at d2d = d'_BP.
double threegpp_breakpoint_gap(const CarrierConfig& cfg, const ThreeGppParams& p);

/// 10 alpha log10(d3d) + beta + 10 gamma log10(f_GHz).
double abg_pathloss(double d3d, const CarrierConfig& cfg, const AbgParams& p,
                    bool los);

enum class ModelChoice { kCi, kThreeGpp, kAbg };
ModelChoice model_from_string(std::string_view name);
std::string_view to_string(ModelChoice m) noexcept;

/// Everything needed to turn masks into a pathloss map.
struct ModelSet {
  ModelChoice choice = ModelChoice::kCi;
  CiModelParams ci;
  double h_e = 1.0;
  Band band = Band::kTr38900_28GHz;
  AbgParams abg = AbgParams::urban_28ghz();
  double indoor_offset_db = 20.0;
  double propagation_speed = kNominalSpeedOfLight;
};

/// Per-receiver empirical value (no indoor offset).
double model_pathloss(const ModelSet& models, const CarrierConfig& cfg,
                      double h_tx, double h_rx, double d2d, double d3d, bool los,
                      double shadow_db);

/// Builds the scenario's pathloss map. LOS receivers use the LOS formula
/// of the chosen model and NLOS receivers the NLOS one. With an external
/// map, LOS receivers take the external value and NLOS receivers
/// min(external, CI NLOS). Indoor receivers get the additive indoor
/// offset. Shapes must match the scenario grid.
PathlossMap assemble_pathloss_map(const geometry::TransmitterScenario& scenario,
                                  const FeatureGrid& los_mask,
                                  const FeatureGrid& building_mask,
                                  const ModelSet& models,
                                  const PathlossMap* external = nullptr);

/// Single pass: each pixel becomes the mean of itself and its existing
/// 4-neighbours.
PathlossMap smooth_map(const PathlossMap& map);

}  // namespace radiogrid::pathloss
