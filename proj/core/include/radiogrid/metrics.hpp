// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radiogrid::metrics {

/// Pairwise (cascade) sum; the association order depends only on the length.
double pairwise_sum(std::span<const double> values) noexcept;

/// sqrt(mean((y - yhat)^2)), in the units of y.
double rmse(std::span<const double> y, std::span<const double> yhat);
/// mean(|y - yhat|).
double mae(std::span<const double> y, std::span<const double> yhat);
/// sum((y - yhat)^2) / sum(y^2). Rejects an all-zero reference.
double nmse(std::span<const double> y, std::span<const double> yhat);

/// Sufficient statistics of one comparison.
struct ErrorSums {
  double squared = 0.0;
  double absolute = 0.0;
  double reference_energy = 0.0;
  std::size_t count = 0;
};

ErrorSums error_sums(std::span<const double> y, std::span<const double> yhat);

struct MetricValues {
  double rmse_db = 0.0;
  double mae_db = 0.0;
  double nmse = 0.0;
  std::size_t pixels = 0;
};

MetricValues finalize(std::span<const ErrorSums> parts);

struct ScenarioMetrics {
  std::string scenario;
  std::size_t samples = 0;
  MetricValues values;
};

struct MetricReport {
  std::string label;  // e.g. model name
  std::size_t n_samples = 0;
  MetricValues overall;
  std::vector<ScenarioMetrics> per_scenario;  // sorted by scenario id

  std::string to_json() const;
  std::string to_table() const;
};

/// Collects per-sample sums in insertion order so the final reduction is
/// independent of how the samples were produced.
class MetricAccumulator {
 public:
  void add(std::string_view scenario, std::span<const double> y,
           std::span<const double> yhat);

  std::size_t samples() const noexcept { return all_.size(); }
  MetricReport report(std::string label) const;

 private:
  std::vector<ErrorSums> all_;
  std::map<std::string, std::vector<ErrorSums>, std::less<>> by_scenario_;
};

}  // namespace radiogrid::metrics
