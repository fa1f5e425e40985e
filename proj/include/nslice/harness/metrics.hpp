// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nslice/rl/trainer.hpp"

namespace nslice::harness {

/// Bumped whenever the column set or its meaning changes.
inline constexpr int kMetricsSchemaVersion = 1;
inline constexpr int kAggregateSliceId = -1;

/// One CSV row: one per slice per step plus an aggregate row with
/// slice_id -1 (counts, energy and CPU summed; latency UE-weighted).
struct MetricsRow {
  std::uint64_t step = 0;
  std::uint64_t episode = 0;
  std::uint64_t seed = 0;
  int slice_id = 0;
  std::int64_t arrived = 0;
  std::int64_t admitted = 0;
  double admission_rate = 1.0;
  double latency_ms = 0.0;
  std::int64_t qos_violation_flag = 0;  // aggregate row: number of violating slices
  double energy_j = 0.0;
  double cpu_alloc = 0.0;
  double cpu_used = 0.0;
  double cpu_utilization = 0.0;
  std::int64_t vnf_count = 0;
  double reward = 0.0;
  double cost_total = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

std::string_view metrics_header();

/// Per-slice rows in ascending slice id followed by the aggregate row.
std::vector<MetricsRow> rows_for_step(const rl::StepMetrics& step, std::uint64_t seed);
/// `active_ues` weights the latency mean; equal weights when they sum to 0.
MetricsRow aggregate_row(const std::vector<MetricsRow>& slice_rows, const std::vector<double>& active_ues);

/// Comma-separated, shortest round-trip decimals, no trailing newline.
std::string format_row(const MetricsRow& row);
/// Throws ParseError naming `line_number`.
MetricsRow parse_row(std::string_view line, std::size_t line_number);

/// Whole file including the header. Throws IoError or ParseError.
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

/// Buffers rows and writes them every `flush_interval` steps.
class MetricsWriter {
 public:
  /// Truncates `path` and writes the header. Throws IoError.
  MetricsWriter(const std::filesystem::path& path, std::uint64_t flush_interval);
  ~MetricsWriter();
  MetricsWriter(const MetricsWriter&) = delete;
  MetricsWriter& operator=(const MetricsWriter&) = delete;

  void write_step(const std::vector<MetricsRow>& rows);
  void flush();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::string pending_;
  std::uint64_t flush_interval_;
  std::uint64_t steps_since_flush_ = 0;
};

/// Concatenates per-seed CSVs (each already in step order) ordered by seed.
/// Throws IoError.
void merge_metrics(const std::vector<std::pair<std::uint64_t, std::filesystem::path>>& per_seed,
                   const std::filesystem::path& out);

}  // namespace nslice::harness
