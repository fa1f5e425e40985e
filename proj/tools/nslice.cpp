// SPDX-License-Identifier: Apache-2.0
// nslice: train, evaluate, compare and render network-slicing agents.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nslice/harness/commands.hpp"
#include "nslice/harness/exit_codes.hpp"
#include "nslice/harness/run_config.hpp"

namespace {

using namespace nslice::harness;

struct RunFlags {
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::vector<std::string> overrides;
  std::string algorithm;

  void attach(CLI::App& cmd) {
    cmd.add_option("--seed", seeds, "Seed to train (repeatable); replaces run.seeds");
    cmd.add_option("--out", out, "Output directory");
    cmd.add_option("--override", overrides, "Config override key.path=value (repeatable)");
    cmd.add_option("--algorithm", algorithm, "Learning algorithm")->check(CLI::IsMember({"td3", "ddpg"}));
  }

  std::vector<std::string> all_overrides() const {
    std::vector<std::string> all = overrides;
    if (!seeds.empty()) {
      std::string list = "run.seeds=[";
      for (std::size_t i = 0; i < seeds.size(); ++i) list += (i ? "," : "") + std::to_string(seeds[i]);
      all.push_back(list + "]");
    }
    if (!out.empty()) all.push_back("run.out_dir=\"" + out + "\"");
    if (!algorithm.empty()) all.push_back("agent.algorithm=\"" + algorithm + "\"");
    return all;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network-slicing simulator with TD3 and DDPG agents"};
  app.require_subcommand(1);

  std::string config_path;
  RunFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Train one agent per seed and write metrics, checkpoints and a summary");
  train->add_option("--config", config_path, "Run configuration (JSON)")->required();
  train_flags.attach(*train);

  EvaluateOptions eval;
  std::string eval_checkpoint, eval_out = "eval", eval_config;
  std::vector<std::string> eval_overrides;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Run a trained policy greedily");
  evaluate->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required();
  evaluate->add_option("--config", eval_config, "Scenario to evaluate in (defaults to the checkpoint's)");
  evaluate->add_option("--override", eval_overrides, "Config override key.path=value (repeatable)");
  evaluate->add_option("--episodes", eval.episodes, "Number of episodes")->capture_default_str();
  evaluate->add_option("--seed", eval.seed, "Environment seed")->capture_default_str();
  evaluate->add_option("--out", eval_out, "Output directory")->capture_default_str();

  std::vector<std::string> compare_paths;
  RunFlags compare_flags;
  CLI::App* compare = app.add_subcommand("compare", "Train several configurations and tabulate them");
  compare->add_option("--config", compare_paths, "Run configurations (at least two)")->required();
  compare_flags.attach(*compare);

  RenderOptions render;
  std::string render_csv, render_out;
  CLI::App* render_cmd = app.add_subcommand("render", "Draw smoothed learning curves from a metrics CSV");
  render_cmd->add_option("--csv", render_csv, "Metrics CSV")->required();
  render_cmd->add_option("--out", render_out, "Output SVG")->required();
  render_cmd->add_option("--metric", render.metric, "Metrics column")->capture_default_str();
  render_cmd->add_option("--slice", render.slice_id, "Slice id, -1 for the aggregate")->capture_default_str();
  render_cmd->add_option("--window", render.window, "Moving-average window in steps")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  return guarded(
      [&]() -> int {
        if (*train) {
          train_all(load_run_config(config_path, train_flags.all_overrides()), std::cout);
          return kOk;
        }
        if (*evaluate) {
          eval.checkpoint = eval_checkpoint;
          eval.out_dir = eval_out;
          if (!eval_config.empty()) eval.scenario = load_run_config(eval_config, eval_overrides).scenario;
          nslice::harness::evaluate(eval, std::cout);
          return kOk;
        }
        if (*compare) {
          if (compare_paths.size() < 2) {
            std::cerr << "compare needs at least two --config files\n";
            return kUsage;
          }
          std::vector<CompareEntry> entries;
          std::vector<std::string> overrides = compare_flags.all_overrides();
          std::string out = compare_flags.out.empty() ? "runs/compare" : compare_flags.out;
          std::erase_if(overrides, [](const std::string& o) { return o.starts_with("run.out_dir="); });
          for (const std::string& p : compare_paths) {
            entries.push_back({std::filesystem::path(p).stem().string(), load_run_config(p, overrides)});
          }
          nslice::harness::compare(std::move(entries), out, std::cout);
          return kOk;
        }
        render.csv = render_csv;
        render.out = render_out;
        nslice::harness::render(render);
        return kOk;
      },
      std::cerr);
}
