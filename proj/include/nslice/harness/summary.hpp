// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "nslice/harness/metrics.hpp"

namespace nslice::harness {

inline constexpr int kSummarySchemaVersion = 1;
/// Fraction of training steps, counted from the end, that the final
/// statistics cover.
inline constexpr double kFinalFraction = 0.2;

/// Means over the final window for one slice (or the aggregate, slice_id -1).
struct WindowStats {
  int slice_id = 0;
  double violation_rate = 0.0;  // aggregate: fraction of steps with any violating slice
  double admission_rate = 1.0;  // admitted / arrived over the window
  double latency_ms = 0.0;
  double energy_j = 0.0;
  double cpu_utilization = 0.0;
};

struct SeedSummary {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  std::uint64_t episodes_completed = 0;
  std::uint64_t window_start = 0;
  /// Mean return of episodes that ended inside the final window; empty when
  /// none did.
  std::optional<double> final_mean_return;
  std::vector<WindowStats> slices;
  WindowStats aggregate;
  std::vector<double> episode_returns;
  std::vector<std::uint64_t> episode_end_steps;
};

/// First step of the final window for a run of `total_steps`.
std::uint64_t final_window_start(std::uint64_t total_steps);

/// Streams one run's rows and keeps only what the summary and curves need.
class SummaryBuilder {
 public:
  /// The window defaults to the final fraction of `total_steps`.
  SummaryBuilder(std::uint64_t seed, std::size_t num_slices, std::uint64_t total_steps,
                 std::optional<std::uint64_t> window_start = std::nullopt);

  /// `rows` as produced by rows_for_step(); `done` marks an episode end.
  void add(const std::vector<MetricsRow>& rows, bool done, double episode_return);
  SeedSummary finish() const;

  /// Aggregate rows in step order.
  const std::vector<MetricsRow>& aggregate_rows() const noexcept { return aggregate_rows_; }

 private:
  struct Acc {
    std::uint64_t steps = 0;
    std::uint64_t violations = 0;
    std::int64_t arrived = 0;
    std::int64_t admitted = 0;
    double latency = 0.0;
    double energy = 0.0;
    double utilization = 0.0;
  };
  static void accumulate(Acc& acc, const MetricsRow& row);
  static WindowStats stats(int slice_id, const Acc& acc);

  SeedSummary summary_;
  std::vector<Acc> slice_acc_;
  std::vector<int> slice_ids_;
  Acc aggregate_acc_;
  double return_sum_ = 0.0;
  std::uint64_t returns_in_window_ = 0;
  std::vector<MetricsRow> aggregate_rows_;
};

nlohmann::json to_json(const WindowStats& s);
nlohmann::json to_json(const SeedSummary& s);

/// Linear-interpolation quantile of unsorted values; q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Median with interquartile range; iqr is empty for fewer than two values.
struct Spread {
  double median = 0.0;
  std::optional<double> iqr;
};
Spread spread(std::span<const double> values);

}  // namespace nslice::harness
