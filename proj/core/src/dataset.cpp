// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <utility>

#include "radiogrid/error.hpp"
#include "radiogrid/rng.hpp"

namespace radiogrid::dataset {

std::string_view to_string(Flip flip) noexcept {
  switch (flip) {
    case Flip::kNone: return "none";
    case Flip::kHorizontal: return "hflip";
    case Flip::kVertical: return "vflip";
  }
  return "none";
}

Flip flip_from_string(std::string_view name) {
  if (name == "none") return Flip::kNone;
  if (name == "hflip" || name == "horizontal") return Flip::kHorizontal;
  if (name == "vflip" || name == "vertical") return Flip::kVertical;
  throw DatasetError("unknown flip '" + std::string(name) + "'");
}

std::vector<PatchSpec> structured_patches(std::size_t rows, std::size_t cols) {
  if (rows != 256 || cols != 384) {
    throw GridError("structured patches need a 256x384 grid, got " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  std::vector<PatchSpec> specs;
  auto add = [&](std::size_t r0, std::size_t c0, std::size_t rs, std::size_t cs) {
    specs.push_back({r0, c0, rs, cs, kPatchSize, Flip::kNone});
  };
  for (std::size_t r0 : {0, 128}) {
    for (std::size_t c0 : {0, 128, 256}) add(r0, c0, 1, 1);
  }
  for (std::size_t c0 : {0, 128, 256}) add(0, c0, 2, 1);
  for (std::size_t c0 : {0, 1}) {
    for (std::size_t r0 : {0, 128}) add(r0, c0, 1, 2);
  }
  for (std::size_t c0 : {0, 1}) add(0, c0, 2, 2);
  for (std::size_t r0 : {0, 128}) add(r0, 0, 1, 3);
  add(0, 0, 2, 3);
  return specs;
}

std::vector<PatchSpec> random_patches(std::size_t rows, std::size_t cols,
                                      std::size_t count, std::uint64_t seed,
                                      std::span<const PatchSpec> exclude) {
  auto feasible = [](std::size_t extent) {
    std::vector<std::size_t> out;
    for (std::size_t s : {1, 2, 3}) {
      if ((kPatchSize - 1) * s < extent) out.push_back(s);
    }
    return out;
  };
  const auto row_strides = feasible(rows);
  const auto col_strides = feasible(cols);
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;
  std::set<Key> taken;
  for (const PatchSpec& e : exclude) taken.insert(e.identity());

  std::size_t available = 0;
  for (std::size_t rs : row_strides) {
    for (std::size_t cs : col_strides) {
      available += (rows - (kPatchSize - 1) * rs) * (cols - (kPatchSize - 1) * cs);
    }
  }
  std::size_t blocked = 0;
  for (const Key& k : taken) {
    const auto [r0, c0, rs, cs] = k;
    if (PatchSpec{r0, c0, rs, cs}.fits(rows, cols) &&
        std::find(row_strides.begin(), row_strides.end(), rs) != row_strides.end() &&
        std::find(col_strides.begin(), col_strides.end(), cs) != col_strides.end()) {
      ++blocked;
    }
  }
  if (row_strides.empty() || col_strides.empty() || available - blocked < count) {
    throw GridError("cannot draw " + std::to_string(count) +
                    " distinct 128x128 patches from a " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " grid");
  }

  auto engine = keyed_engine(stream_key(seed, stable_hash("random_patches")));
  std::vector<PatchSpec> specs;
  specs.reserve(count);
  while (specs.size() < count) {
    std::uniform_int_distribution<std::size_t> pick_rs(0, row_strides.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_cs(0, col_strides.size() - 1);
    const std::size_t rs = row_strides[pick_rs(engine)];
    const std::size_t cs = col_strides[pick_cs(engine)];
    std::uniform_int_distribution<std::size_t> pick_r0(0, rows - 1 - (kPatchSize - 1) * rs);
    std::uniform_int_distribution<std::size_t> pick_c0(0, cols - 1 - (kPatchSize - 1) * cs);
    const PatchSpec spec{pick_r0(engine), pick_c0(engine), rs, cs, kPatchSize, Flip::kNone};
    if (taken.insert(spec.identity()).second) specs.push_back(spec);
  }
  return specs;
}

FeatureGrid extract_patch(const FeatureGrid& g, const PatchSpec& spec) {
  if (!spec.fits(g.rows(), g.cols())) {
    throw GridError("patch (" + std::to_string(spec.row0) + ", " +
                    std::to_string(spec.col0) + ", stride " +
                    std::to_string(spec.row_stride) + "x" +
                    std::to_string(spec.col_stride) + ") does not fit a " +
                    std::to_string(g.rows()) + "x" + std::to_string(g.cols()) + " grid");
  }
  std::vector<double> values(spec.size * spec.size);
  for (std::size_t r = 0; r < spec.size; ++r) {
    const std::size_t src_row = spec.row0 + r * spec.row_stride;
    for (std::size_t c = 0; c < spec.size; ++c) {
      values[r * spec.size + c] = g(src_row, spec.col0 + c * spec.col_stride);
    }
  }
  return apply_flip(FeatureGrid(spec.size, spec.size, g.kind(), std::move(values)),
                    spec.flip);
}

FeatureGrid apply_flip(const FeatureGrid& g, Flip flip) {
  if (flip == Flip::kNone) return g;
  FeatureGrid out = g;
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      out(r, c) = flip == Flip::kHorizontal ? g(r, cols - 1 - c) : g(rows - 1 - r, c);
    }
  }
  return out;
}

std::vector<PatchSpec> quadrant_patches() {
  return {{0, 0, 1, 1, kPatchSize, Flip::kNone},
          {0, 128, 1, 1, kPatchSize, Flip::kNone},
          {128, 0, 1, 1, kPatchSize, Flip::kNone},
          {128, 128, 1, 1, kPatchSize, Flip::kNone}};
}

std::array<FeatureGrid, 4> quadrant_split(const FeatureGrid& g) {
  if (g.rows() != 256 || g.cols() != 256) {
    throw GridError("quadrant split needs a 256x256 grid, got " +
                    std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  }
  const auto specs = quadrant_patches();
  return {extract_patch(g, specs[0]), extract_patch(g, specs[1]),
          extract_patch(g, specs[2]), extract_patch(g, specs[3])};
}

Sample make_sample(std::string id, std::string scenario,
                   std::span<const FeatureGrid> channels, const FeatureGrid& target,
                   const PatchSpec& spec) {
  Sample s;
  s.id = std::move(id);
  s.scenario = std::move(scenario);
  s.spec = spec;
  s.channels.reserve(channels.size());
  for (const FeatureGrid& ch : channels) {
    require_same_shape(ch, target, "make_sample");
    s.channels.push_back(extract_patch(ch, spec));
  }
  s.target = extract_patch(target, spec);
  return s;
}

std::string sample_id(std::string_view scenario, std::size_t patch_index, Flip flip) {
  char index[16];
  std::snprintf(index, sizeof index, "%03zu", patch_index);
  return std::string(scenario) + "-p" + index + "-" + std::string(to_string(flip));
}

std::vector<Sample> augment(std::span<const Sample> samples) {
  std::vector<Sample> out;
  out.reserve(samples.size() * 3);
  for (const Sample& s : samples) {
    if (s.spec.flip != Flip::kNone) {
      throw DatasetError("augment: sample '" + s.id + "' is already flipped");
    }
    out.push_back(s);
    for (Flip flip : {Flip::kHorizontal, Flip::kVertical}) {
      Sample f = s;
      f.spec.flip = flip;
      const std::string suffix = "-none";
      if (f.id.size() >= suffix.size() &&
          f.id.compare(f.id.size() - suffix.size(), suffix.size(), suffix) == 0) {
        f.id.replace(f.id.size() - suffix.size(), suffix.size(),
                     "-" + std::string(to_string(flip)));
      } else {
        f.id += "-" + std::string(to_string(flip));
      }
      for (FeatureGrid& ch : f.channels) ch = apply_flip(ch, flip);
      f.target = apply_flip(f.target, flip);
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::string_view to_string(SplitMode mode) noexcept {
  return mode == SplitMode::kPerTransmitter ? "per_transmitter" : "cross_city";
}

SplitMode split_mode_from_string(std::string_view name) {
  if (name == "per_transmitter") return SplitMode::kPerTransmitter;
  if (name == "cross_city") return SplitMode::kCrossCity;
  throw ConfigError("unknown split mode '" + std::string(name) +
                    "' (expected per_transmitter or cross_city)");
}

SplitAssignment SplitAssignment::per_transmitter(
    std::span<const ScenarioKey> scenarios,
    std::span<const std::size_t> test_transmitters) {
  SplitAssignment split;
  split.mode = SplitMode::kPerTransmitter;
  for (const ScenarioKey& s : scenarios) {
    const bool test = std::find(test_transmitters.begin(), test_transmitters.end(),
                                s.transmitter) != test_transmitters.end();
    (test ? split.test : split.train).push_back(s.id);
  }
  return split;
}

SplitAssignment SplitAssignment::cross_city(std::span<const ScenarioKey> scenarios,
                                            std::string_view holdout_city) {
  SplitAssignment split;
  split.mode = SplitMode::kCrossCity;
  bool seen = false;
  for (const ScenarioKey& s : scenarios) {
    const bool test = s.city == holdout_city;
    seen = seen || test;
    (test ? split.test : split.train).push_back(s.id);
  }
  if (!seen) {
    throw ConfigError("cross-city split: no scenario belongs to held-out city '" +
                      std::string(holdout_city) + "'");
  }
  return split;
}

bool SplitAssignment::is_test(std::string_view scenario) const noexcept {
  return std::find(test.begin(), test.end(), scenario) != test.end();
}

void SplitAssignment::validate(std::span<const std::string> all_ids) const {
  std::set<std::string> train_set(train.begin(), train.end());
  std::set<std::string> seen;
  for (const std::string& id : test) {
    if (train_set.count(id)) {
      throw DatasetError("split: scenario '" + id + "' is in both train and test");
    }
  }
  seen.insert(train.begin(), train.end());
  seen.insert(test.begin(), test.end());
  const std::set<std::string> expected(all_ids.begin(), all_ids.end());
  if (seen != expected) {
    throw DatasetError("split: train and test do not cover the scenario set exactly");
  }
}

}  // namespace radiogrid::dataset
