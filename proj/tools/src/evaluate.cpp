// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "radiogrid/channels.hpp"
#include "radiogrid/error.hpp"
#include "radiogrid/log.hpp"
#include "radiogrid/npy.hpp"
#include "radiogrid_cli/commands.hpp"

namespace radiogrid::cli {
namespace {

double metadata_number(const dataset::DatasetManifest& m, const std::string& key,
                       double fallback) {
  const auto it = m.metadata.find(key);
  return it == m.metadata.end() ? fallback : std::stod(it->second);
}

}  // namespace

FeatureGrid empirical_prediction(const dataset::ScenarioRecord& sc,
                                 const dataset::Sample& sample,
                                 const pathloss::ModelSet& models, std::size_t los_channel) {
  const dataset::PatchSpec& p = sample.spec;
  const FeatureGrid& los = sample.channels.at(los_channel);
  const pathloss::CarrierConfig cfg(sc.frequency_ghz, models.propagation_speed);
  FeatureGrid out(p.size, p.size, GridKind::kPathloss);
  for (std::size_t r = 0; r < p.size; ++r) {
    for (std::size_t c = 0; c < p.size; ++c) {
      // Undo the flip to find the source receiver of this pixel.
      const std::size_t pr = p.flip == dataset::Flip::kVertical ? p.size - 1 - r : r;
      const std::size_t pc = p.flip == dataset::Flip::kHorizontal ? p.size - 1 - c : c;
      const double gx = sc.origin_x + static_cast<double>(p.col0 + pc * p.col_stride) * sc.spacing_x;
      const double gy = sc.origin_y + static_cast<double>(p.row0 + pr * p.row_stride) * sc.spacing_y;
      const double d2d = std::hypot(gx - sc.tx_x, gy - sc.tx_y);
      const double d3d = std::hypot(d2d, sc.tx_z - sc.rx_height);
      out(r, c) = pathloss::model_pathloss(models, cfg, sc.tx_z, sc.rx_height, d2d, d3d,
                                           los(r, c) != 0.0, 0.0);
    }
  }
  return out;
}

metrics::MetricReport cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  if (o.predictions.has_value() == o.model.has_value()) {
    throw ConfigError("evaluate needs exactly one of --predictions or --model");
  }
  if (o.split != "test" && o.split != "train" && o.split != "all") {
    throw ConfigError("unknown split '" + o.split + "' (expected test, train or all)");
  }
  const dataset::DatasetManifest m = dataset::read_manifest(o.dataset);
  const auto stats_it = m.normalization.find("pathloss");
  if (stats_it == m.normalization.end()) {
    throw DatasetError("dataset manifest lacks pathloss normalization stats");
  }
  const channels::NormalizationStats stats = stats_it->second;

  pathloss::ModelSet models;
  std::size_t los_channel = 0;
  if (o.model) {
    models.choice = *o.model;
    models.band = o.band ? *o.band
                         : pathloss::band_from_string(m.metadata.count("band")
                                                          ? m.metadata.at("band")
                                                          : "28ghz");
    models.abg = pathloss::AbgParams::for_band(models.band);
    models.h_e = metadata_number(m, "h_e", models.h_e);
    models.propagation_speed =
        metadata_number(m, "propagation_speed", models.propagation_speed);
    const auto it = std::find(m.channel_order.begin(), m.channel_order.end(), "los_mask");
    if (it == m.channel_order.end()) throw DatasetError("dataset has no los_mask channel");
    los_channel = static_cast<std::size_t>(it - m.channel_order.begin());
  }

  metrics::MetricAccumulator acc;
  std::vector<std::string> missing;
  for (const dataset::FileEntry& e : m.files) {
    if (o.split != "all" && e.split != o.split) continue;
    const dataset::Sample s = dataset::read_sample(o.dataset, m, e);
    const FeatureGrid truth = channels::denormalize(s.target, stats, GridKind::kPathloss);
    FeatureGrid pred;
    if (o.model) {
      const dataset::ScenarioRecord* sc = m.find_scenario(e.scenario);
      if (sc == nullptr) {
        throw DatasetError("sample '" + e.sample_id + "' references unknown scenario");
      }
      pred = empirical_prediction(*sc, s, models, los_channel);
    } else {
      const auto path = *o.predictions / (e.sample_id + ".npy");
      if (!std::filesystem::exists(path)) {
        missing.push_back(e.sample_id);
        continue;
      }
      const FeatureGrid normalized = npy::load(path, GridKind::kNormalized);
      require_same_shape(normalized, s.target, "prediction " + path.string());
      pred = channels::denormalize(normalized, stats, GridKind::kPathloss);
    }
    acc.add(e.scenario, truth.values(), pred.values());
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += " " + missing[i];
    if (missing.size() > 20) list += " ...";
    log().warn("{} samples have no prediction and are skipped:{}", missing.size(), list);
  }
  if (acc.samples() == 0) {
    throw DatasetError("no samples to evaluate in split '" + o.split + "'");
  }
  const metrics::MetricReport report =
      acc.report(o.model ? std::string(pathloss::to_string(*o.model)) : "predictions");
  out << report.to_table();
  if (o.report_json) {
    std::ofstream f(*o.report_json);
    if (!f) throw ConfigError(o.report_json->string() + ": cannot open for writing");
    f << report.to_json();
  }
  return report;
}

}  // namespace radiogrid::cli
