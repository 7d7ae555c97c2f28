// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <limits>

#include "radiogrid/synthetic.hpp"
#include "radiogrid_cli/commands.hpp"

namespace radiogrid::cli {
namespace {

template <typename Fn>
double best_of(std::size_t repeats, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::max<std::size_t>(repeats, 1); ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count());
  }
  return best;
}

}  // namespace

BenchRow bench_scene(std::string name, const geometry::Environment& env,
                     const geometry::Point3& tx, const geometry::ReceiverGridSpec& grid,
                     unsigned threads, std::size_t repeats) {
  BenchRow row;
  row.scenario = std::move(name);
  row.buildings = env.buildings().size();
  los::LosStats stats;
  FeatureGrid filtered;
  FeatureGrid brute;
  row.filtered_seconds = best_of(repeats, [&] {
    filtered = los::compute_los_mask(tx, grid, env, {threads}, &stats);
  });
  row.brute_seconds = best_of(repeats, [&] { brute = los::brute_force_los_mask(tx, grid, env); });
  row.walls = stats.walls;
  row.facing = stats.facing;
  row.tested = stats.tested;
  row.receivers = stats.receivers;
  row.identical = filtered == brute;
  return row;
}

std::vector<BenchRow> cmd_bench(const BenchOptions& o, std::ostream& out) {
  std::vector<BenchRow> rows;
  if (o.config) {
    const ScenarioBatch batch = build_scenarios(*o.config);
    for (const Scenario& s : batch.scenarios) {
      rows.push_back(bench_scene(s.id, batch.environments[s.environment], s.spec.tx,
                                 s.spec.grid, o.threads, o.repeats));
    }
  } else {
    geometry::ReceiverGridSpec grid;
    synthetic::SceneOptions options;
    options.buildings = o.buildings;
    options.extent = grid_extent(grid);
    const auto env = synthetic::generate_scene(options, o.seed, "synthetic");
    const auto tx = synthetic::open_position(env, options.extent, o.altitude, o.seed);
    rows.push_back(bench_scene(fmt::format("synthetic-{}", o.buildings), env, tx, grid,
                               o.threads, o.repeats));
  }
  out << fmt::format("{:<28} {:>9} {:>6} {:>8} {:>7} {:>9} {:>11} {:>11} {:>8} {:>9}\n",
                     "scenario", "buildings", "walls", "facing %", "tested", "receivers",
                     "filtered s", "brute s", "speedup", "identical");
  for (const BenchRow& r : rows) {
    out << fmt::format(
        "{:<28} {:>9} {:>6} {:>8.1f} {:>7} {:>9} {:>11.4f} {:>11.4f} {:>8.2f} {:>9}\n",
        r.scenario, r.buildings, r.walls, 100.0 * r.facing_fraction(), r.tested,
        r.receivers, r.filtered_seconds, r.brute_seconds, r.speedup(),
        r.identical ? "yes" : "NO");
  }
  return rows;
}

}  // namespace radiogrid::cli
