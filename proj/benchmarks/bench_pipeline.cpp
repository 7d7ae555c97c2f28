// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "radiogrid/channels.hpp"
#include "radiogrid/dataset.hpp"
#include "radiogrid/dataset_io.hpp"
#include "radiogrid/pathloss.hpp"
#include "radiogrid/synthetic.hpp"

namespace {

using namespace radiogrid;

void BM_PathlossMap(benchmark::State& state) {
  geometry::TransmitterScenario s;
  s.id = "bench";
  s.tx = {190, 120, 35};
  const FeatureGrid los(256, 384, GridKind::kLosMask, 0.0);
  const FeatureGrid bld(256, 384, GridKind::kBuildingMask, 0.0);
  pathloss::ModelSet models;
  models.choice = static_cast<pathloss::ModelChoice>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pathloss::assemble_pathloss_map(s, los, bld, models));
  }
  state.SetItemsProcessed(state.iterations() * 256 * 384);
}
BENCHMARK(BM_PathlossMap)->DenseRange(0, 2)->ArgName("model")->Unit(benchmark::kMillisecond);

void BM_BuildingMask(benchmark::State& state) {
  synthetic::SceneOptions opt;
  opt.buildings = 67;
  const auto env = synthetic::generate_scene(opt, 3);
  const geometry::ReceiverGridSpec grid;
  for (auto _ : state) {
    benchmark::DoNotOptimize(channels::building_mask_channel(grid, env));
  }
}
BENCHMARK(BM_BuildingMask)->Unit(benchmark::kMillisecond);

void BM_ExtractPatches(benchmark::State& state) {
  FeatureGrid g(256, 384, GridKind::kNormalized, 0.5);
  auto specs = dataset::structured_patches();
  const auto extra = dataset::random_patches(256, 384, 82, 1, specs);
  specs.insert(specs.end(), extra.begin(), extra.end());
  for (auto _ : state) {
    for (const auto& spec : specs) benchmark::DoNotOptimize(dataset::extract_patch(g, spec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(specs.size()));
}
BENCHMARK(BM_ExtractPatches)->Unit(benchmark::kMillisecond);

void BM_EncodeSample(benchmark::State& state) {
  dataset::Sample s;
  s.id = "bench";
  s.channels.assign(3, FeatureGrid(128, 128, GridKind::kNormalized, 0.25));
  s.target = FeatureGrid(128, 128, GridKind::kNormalized, 0.75);
  for (auto _ : state) benchmark::DoNotOptimize(dataset::encode_sample(s));
  state.SetBytesProcessed(state.iterations() * 4 * 128 * 128 * 4);
}
BENCHMARK(BM_EncodeSample);

}  // namespace

BENCHMARK_MAIN();
