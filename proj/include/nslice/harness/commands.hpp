// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nslice/errors.hpp"
#include "nslice/harness/run_config.hpp"
#include "nslice/harness/summary.hpp"

namespace nslice::harness {

/// Scenario and policy dimensions disagree.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Configurations to be compared describe different scenarios.
class ScenarioMismatchError : public Error {
 public:
  using Error::Error;
};

/// Result of one seed's training run.
struct SeedRun {
  SeedSummary summary;
  std::vector<MetricsRow> aggregate_rows;
};

/// Trains one seed into `seed_dir` (metrics.csv, checkpoint.json and any
/// periodic checkpoints). On divergence writes checkpoint_failure.json and
/// rethrows the TrainingError.
SeedRun train_seed(const RunConfig& config, std::uint64_t seed, const std::filesystem::path& seed_dir);

/// Trains every seed, then writes config.json, merged metrics.csv and
/// summary.json into config.out_dir.
std::vector<SeedRun> train_all(const RunConfig& config, std::ostream& log);

nlohmann::json summary_json(const RunConfig& config, const std::vector<SeedSummary>& seeds);

struct EvaluateOptions {
  std::filesystem::path checkpoint;
  std::uint64_t episodes = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "eval";
  /// Scenario to evaluate in; the checkpoint's own scenario when empty.
  std::optional<env::ScenarioConfig> scenario;
};

struct EvaluateResult {
  std::vector<MetricsRow> rows;
  std::vector<double> episode_returns;
};

/// Greedy rollout; writes metrics.csv and summary.json into out_dir.
/// Throws DimensionMismatchError when the scenario does not fit the policy.
EvaluateResult evaluate(const EvaluateOptions& options, std::ostream& log);

struct CompareEntry {
  std::string label;
  RunConfig config;
};

struct CompareRow {
  std::string label;
  Spread final_return;
  Spread admission_rate;
  Spread violation_rate;
  Spread energy_j;
  Spread cpu_utilization;
  std::vector<Spread> slice_violation_rate;
  std::vector<Spread> slice_admission_rate;
  std::vector<Spread> slice_cpu_utilization;
};

/// Runs every entry into out_dir/<label>, then writes compare.md,
/// compare.json and learning-curve SVGs. Rows are ranked by median final
/// return, best first. Throws ScenarioMismatchError before training when
/// scenarios differ.
std::vector<CompareRow> compare(std::vector<CompareEntry> entries, const std::filesystem::path& out_dir,
                                std::ostream& log);

/// Builds one comparison row from finished runs.
CompareRow compare_row(const std::string& label, const std::vector<SeedSummary>& seeds);
std::string format_compare_table(const std::vector<CompareRow>& rows);

struct RenderOptions {
  std::filesystem::path csv;
  std::filesystem::path out;
  std::string metric = "reward";
  int slice_id = -1;
  std::size_t window = 100;
};

/// Reads a metrics CSV and writes one smoothed chart. Throws ParseError.
void render(const RenderOptions& options);

/// Runs `body` and maps exceptions onto documented exit codes, printing the
/// message to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace nslice::harness
