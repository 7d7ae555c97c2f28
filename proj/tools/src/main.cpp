// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>

#include "radiogrid/error.hpp"
#include "radiogrid/log.hpp"
#include "radiogrid_cli/commands.hpp"
#include "radiogrid_cli/config.hpp"

namespace {

using namespace radiogrid;

struct CommonFlags {
  std::string config;
  std::string model;
  std::string band;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
};

void add_common(CLI::App& cmd, CommonFlags& f, bool config_required) {
  auto* opt = cmd.add_option("--config", f.config, "Run configuration (TOML)");
  opt->check(CLI::ExistingFile);
  if (config_required) opt->required();
  cmd.add_option("--model", f.model, "Pathloss model")
      ->check(CLI::IsMember({"ci", "3gpp", "abg"}));
  cmd.add_option("--band", f.band, "3GPP NLOS band variant")
      ->check(CLI::IsMember({"28ghz", "5.9ghz"}));
  cmd.add_option("--seed", f.seed, "Base RNG seed");
  cmd.add_option("--threads", f.threads, "Worker threads (0 = available parallelism)");
  cmd.add_option("--out", f.out, "Output directory");
}

cli::RunConfig resolve_config(const CLI::App& cmd, const CommonFlags& f) {
  cli::RunConfig config = cli::load_run_config(f.config);
  cli::Overrides o;
  if (cmd.count("--model")) o.model = f.model;
  if (cmd.count("--band")) o.band = f.band;
  if (cmd.count("--seed")) o.seed = f.seed;
  if (cmd.count("--threads")) o.threads = f.threads;
  if (cmd.count("--out")) o.output = f.out;
  cli::apply_overrides(config, o);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radiogrid: geometry-aware radio-map dataset toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "radiogrid 0.1.0");

  CommonFlags los_flags;
  auto* los_cmd = app.add_subcommand("los", "Compute LOS masks and report timings");
  add_common(*los_cmd, los_flags, true);

  CommonFlags gen_flags;
  bool dry_run = false;
  auto* gen_cmd = app.add_subcommand("generate", "Build a dataset directory");
  add_common(*gen_cmd, gen_flags, true);
  gen_cmd->add_flag("--dry-run", dry_run, "Print the manifest preview and write nothing");

  CommonFlags pert_flags;
  cli::PerturbOptions pert;
  auto* pert_cmd = app.add_subcommand("perturb", "Perturb the test split of a dataset");
  pert_cmd->add_option("--dataset", pert.dataset, "Input dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  pert_cmd->add_option("--kind", pert.kind, "distance-near, distance-far, los or building")
      ->required();
  pert_cmd->add_option("--level", pert.level, "Noise level in percent")->required();
  pert_cmd->add_option("--fraction", pert.fraction,
                       "Share of regime receivers given distance noise");
  pert_cmd->add_option("--seed", pert.seed, "Perturbation seed");
  pert_cmd->add_option("--out", pert.output, "Output dataset directory")->required();

  cli::EvaluateOptions eval;
  std::string eval_model, eval_band, eval_predictions, eval_report;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against a dataset");
  eval_cmd->add_option("--dataset", eval.dataset, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  auto* pred_opt = eval_cmd->add_option("--predictions", eval_predictions,
                                        "Directory of <sample_id>.npy predictions");
  auto* model_opt = eval_cmd->add_option("--model", eval_model,
                                         "Score an empirical model instead")
                        ->check(CLI::IsMember({"ci", "3gpp", "abg"}));
  pred_opt->excludes(model_opt);
  eval_cmd->add_option("--band", eval_band, "3GPP NLOS band variant")
      ->check(CLI::IsMember({"28ghz", "5.9ghz"}));
  eval_cmd->add_option("--split", eval.split, "test, train or all");
  eval_cmd->add_option("--report", eval_report, "Also write the report as JSON");

  CommonFlags bench_flags;
  cli::BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time filtered vs brute-force LOS");
  add_common(*bench_cmd, bench_flags, false);
  bench_cmd->add_option("--buildings", bench.buildings, "Synthetic scene size");
  bench_cmd->add_option("--repeats", bench.repeats, "Timing repetitions (best is kept)");
  bench_cmd->add_option("--altitude", bench.altitude, "Synthetic transmitter altitude (m)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*los_cmd) return cli::cmd_los(resolve_config(*los_cmd, los_flags), std::cout);
    if (*gen_cmd) {
      cli::cmd_generate(resolve_config(*gen_cmd, gen_flags), dry_run, std::cout);
      return 0;
    }
    if (*pert_cmd) {
      cli::cmd_perturb(pert, std::cout);
      return 0;
    }
    if (*eval_cmd) {
      if (!eval_predictions.empty()) eval.predictions = eval_predictions;
      if (!eval_model.empty()) eval.model = pathloss::model_from_string(eval_model);
      if (!eval_band.empty()) eval.band = pathloss::band_from_string(eval_band);
      if (!eval_report.empty()) eval.report_json = eval_report;
      cli::cmd_evaluate(eval, std::cout);
      return 0;
    }
    if (*bench_cmd) {
      if (!bench_flags.config.empty()) bench.config = resolve_config(*bench_cmd, bench_flags);
      bench.seed = bench_flags.seed;
      bench.threads = bench_cmd->count("--threads") ? bench_flags.threads : 1;
      const auto rows = cli::cmd_bench(bench, std::cout);
      for (const auto& r : rows) {
        if (!r.identical) {
          log().error("{}: filtered and brute-force masks differ", r.scenario);
          return 1;
        }
      }
      return 0;
    }
  } catch (const Error& e) {
    log().error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    log().error("unexpected failure: {}", e.what());
    return 1;
  }
  return 0;
}
