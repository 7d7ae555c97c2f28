// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/metrics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "radiogrid/error.hpp"

namespace radiogrid::metrics {
namespace {

constexpr std::size_t kLeaf = 8;

template <typename Get>
double cascade(std::size_t begin, std::size_t end, const Get& get) noexcept {
  if (end - begin <= kLeaf) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += get(i);
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return cascade(begin, mid, get) + cascade(mid, end, get);
}

void require_pair(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) {
    throw MetricError("metric inputs differ in length (" + std::to_string(y.size()) +
                      " vs " + std::to_string(yhat.size()) + ")");
  }
  if (y.empty()) throw MetricError("metrics need at least one value");
}

nlohmann::json values_json(const MetricValues& v) {
  return {{"rmse_db", v.rmse_db}, {"mae_db", v.mae_db}, {"nmse", v.nmse},
          {"pixels", v.pixels}};
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  return cascade(0, values.size(), [&](std::size_t i) { return values[i]; });
}

ErrorSums error_sums(std::span<const double> y, std::span<const double> yhat) {
  require_pair(y, yhat);
  ErrorSums s;
  s.squared = cascade(0, y.size(), [&](std::size_t i) {
    const double e = y[i] - yhat[i];
    return e * e;
  });
  s.absolute = cascade(0, y.size(), [&](std::size_t i) { return std::fabs(y[i] - yhat[i]); });
  s.reference_energy = cascade(0, y.size(), [&](std::size_t i) { return y[i] * y[i]; });
  s.count = y.size();
  return s;
}

double rmse(std::span<const double> y, std::span<const double> yhat) {
  const ErrorSums s = error_sums(y, yhat);
  return std::sqrt(s.squared / static_cast<double>(s.count));
}

double mae(std::span<const double> y, std::span<const double> yhat) {
  const ErrorSums s = error_sums(y, yhat);
  return s.absolute / static_cast<double>(s.count);
}

double nmse(std::span<const double> y, std::span<const double> yhat) {
  const ErrorSums s = error_sums(y, yhat);
  if (!(s.reference_energy > 0.0)) {
    throw MetricError("nmse: reference values are all zero");
  }
  return s.squared / s.reference_energy;
}

MetricValues finalize(std::span<const ErrorSums> parts) {
  const std::size_t n = parts.size();
  std::size_t count = 0;
  for (const ErrorSums& p : parts) count += p.count;
  if (count == 0) throw MetricError("metrics need at least one value");
  const double sq = cascade(0, n, [&](std::size_t i) { return parts[i].squared; });
  const double ab = cascade(0, n, [&](std::size_t i) { return parts[i].absolute; });
  const double en = cascade(0, n, [&](std::size_t i) { return parts[i].reference_energy; });
  if (!(en > 0.0)) throw MetricError("nmse: reference values are all zero");
  const double N = static_cast<double>(count);
  return {std::sqrt(sq / N), ab / N, sq / en, count};
}

void MetricAccumulator::add(std::string_view scenario, std::span<const double> y,
                            std::span<const double> yhat) {
  const ErrorSums s = error_sums(y, yhat);
  all_.push_back(s);
  auto it = by_scenario_.find(scenario);
  if (it == by_scenario_.end()) it = by_scenario_.emplace(std::string(scenario), std::vector<ErrorSums>{}).first;
  it->second.push_back(s);
}

MetricReport MetricAccumulator::report(std::string label) const {
  MetricReport r;
  r.label = std::move(label);
  r.n_samples = all_.size();
  r.overall = finalize(all_);
  for (const auto& [id, parts] : by_scenario_) {
    r.per_scenario.push_back({id, parts.size(), finalize(parts)});
  }
  return r;
}

std::string MetricReport::to_json() const {
  nlohmann::json j;
  j["label"] = label;
  j["n_samples"] = n_samples;
  j["overall"] = values_json(overall);
  nlohmann::json rows = nlohmann::json::array();
  for (const ScenarioMetrics& s : per_scenario) {
    nlohmann::json row = values_json(s.values);
    row["scenario"] = s.scenario;
    row["samples"] = s.samples;
    rows.push_back(row);
  }
  j["per_scenario"] = rows;
  return j.dump(2) + "\n";
}

std::string MetricReport::to_table() const {
  std::size_t width = std::string_view("Scenario").size();
  for (const ScenarioMetrics& s : per_scenario) width = std::max(width, s.scenario.size());
  width = std::max(width, label.size());
  std::string out = fmt::format("{:<{}}  {:>8}  {:>10}  {:>10}  {:>10}\n", "Scenario",
                                width, "Samples", "RMSE (dB)", "MAE (dB)", "NMSE");
  out += std::string(width + 46, '-') + "\n";
  auto row = [&](std::string_view name, std::size_t samples, const MetricValues& v) {
    out += fmt::format("{:<{}}  {:>8}  {:>10.4f}  {:>10.4f}  {:>10.6f}\n", name, width,
                       samples, v.rmse_db, v.mae_db, v.nmse);
  };
  for (const ScenarioMetrics& s : per_scenario) row(s.scenario, s.samples, s.values);
  out += std::string(width + 46, '-') + "\n";
  row(label.empty() ? "overall" : label, n_samples, overall);
  return out;
}

}  // namespace radiogrid::metrics
