// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "radiogrid/los.hpp"
#include "radiogrid/synthetic.hpp"

namespace {

using namespace radiogrid;

struct Scene {
  geometry::Environment env;
  geometry::Point3 tx;
};

Scene make_scene(std::size_t buildings) {
  synthetic::SceneOptions opt;
  opt.buildings = buildings;
  Scene s{synthetic::generate_scene(opt, buildings), {}};
  s.tx = synthetic::open_position(s.env, opt.extent, 40.0, 1);
  return s;
}

void BM_LosMask(benchmark::State& state) {
  const Scene s = make_scene(static_cast<std::size_t>(state.range(0)));
  const geometry::ReceiverGridSpec grid;
  const unsigned threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(los::compute_los_mask(s.tx, grid, s.env, {threads}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
  state.counters["walls"] = static_cast<double>(s.env.walls().size());
}
BENCHMARK(BM_LosMask)
    ->ArgsProduct({{10, 67, 150}, {1, 4}})
    ->ArgNames({"buildings", "threads"})
    ->Unit(benchmark::kMillisecond);

void BM_BruteForceLos(benchmark::State& state) {
  const Scene s = make_scene(static_cast<std::size_t>(state.range(0)));
  const geometry::ReceiverGridSpec grid;
  for (auto _ : state) {
    benchmark::DoNotOptimize(los::brute_force_los_mask(s.tx, grid, s.env));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_BruteForceLos)->Arg(67)->ArgName("buildings")->Unit(benchmark::kMillisecond);

void BM_SingleWallKernel(benchmark::State& state) {
  const auto wall = geometry::WallSegment::from_endpoints({0, -50}, {0, 50}, 20.0);
  const geometry::ReceiverGridSpec grid{256, 384, {1, -128}, 1, 1, 1.5};
  const auto rx = geometry::grid_points(grid);
  const geometry::Point3 tx{-30, 0, 25};
  for (auto _ : state) {
    benchmark::DoNotOptimize(los::ray_wall_intersections(tx, rx, wall));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rx.size()));
}
BENCHMARK(BM_SingleWallKernel);

}  // namespace

BENCHMARK_MAIN();
