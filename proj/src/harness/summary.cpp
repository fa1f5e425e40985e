// SPDX-License-Identifier: Apache-2.0

#include "nslice/harness/summary.hpp"

#include <algorithm>
#include <cmath>

#include "nslice/errors.hpp"

namespace nslice::harness {

std::uint64_t final_window_start(std::uint64_t total_steps) {
  const auto window = static_cast<std::uint64_t>(std::ceil(kFinalFraction * static_cast<double>(total_steps)));
  return total_steps - std::min(window, total_steps);
}

SummaryBuilder::SummaryBuilder(std::uint64_t seed, std::size_t num_slices, std::uint64_t total_steps,
                               std::optional<std::uint64_t> window_start)
    : slice_acc_(num_slices), slice_ids_(num_slices) {
  for (std::size_t i = 0; i < num_slices; ++i) slice_ids_[i] = static_cast<int>(i);
  summary_.seed = seed;
  summary_.window_start = window_start.value_or(final_window_start(total_steps));
}

void SummaryBuilder::accumulate(Acc& acc, const MetricsRow& row) {
  ++acc.steps;
  acc.violations += row.qos_violation_flag > 0 ? 1 : 0;
  acc.arrived += row.arrived;
  acc.admitted += row.admitted;
  acc.latency += row.latency_ms;
  acc.energy += row.energy_j;
  acc.utilization += row.cpu_utilization;
}

WindowStats SummaryBuilder::stats(int slice_id, const Acc& acc) {
  WindowStats s;
  s.slice_id = slice_id;
  if (acc.steps == 0) return s;
  const double n = static_cast<double>(acc.steps);
  s.violation_rate = static_cast<double>(acc.violations) / n;
  s.admission_rate = acc.arrived > 0 ? static_cast<double>(acc.admitted) / static_cast<double>(acc.arrived) : 1.0;
  s.latency_ms = acc.latency / n;
  s.energy_j = acc.energy / n;
  s.cpu_utilization = acc.utilization / n;
  return s;
}

void SummaryBuilder::add(const std::vector<MetricsRow>& rows, bool done, double episode_return) {
  if (rows.size() != slice_acc_.size() + 1) throw ContractError("expected one row per slice plus the aggregate");
  const std::uint64_t step = rows.front().step;
  if (summary_.steps == 0) {
    for (std::size_t i = 0; i < slice_acc_.size(); ++i) slice_ids_[i] = rows[i].slice_id;
  }
  ++summary_.steps;
  if (step >= summary_.window_start) {
    for (std::size_t i = 0; i < slice_acc_.size(); ++i) accumulate(slice_acc_[i], rows[i]);
    accumulate(aggregate_acc_, rows.back());
  }
  aggregate_rows_.push_back(rows.back());
  if (done) {
    ++summary_.episodes_completed;
    summary_.episode_returns.push_back(episode_return);
    summary_.episode_end_steps.push_back(step);
    if (step >= summary_.window_start) {
      return_sum_ += episode_return;
      ++returns_in_window_;
    }
  }
}

SeedSummary SummaryBuilder::finish() const {
  SeedSummary s = summary_;
  if (returns_in_window_ > 0) s.final_mean_return = return_sum_ / static_cast<double>(returns_in_window_);
  s.slices.clear();
  for (std::size_t i = 0; i < slice_acc_.size(); ++i) s.slices.push_back(stats(slice_ids_[i], slice_acc_[i]));
  s.aggregate = stats(kAggregateSliceId, aggregate_acc_);
  return s;
}

nlohmann::json to_json(const WindowStats& s) {
  return {{"slice_id", s.slice_id},
          {"violation_rate", s.violation_rate},
          {"admission_rate", s.admission_rate},
          {"latency_ms", s.latency_ms},
          {"energy_j", s.energy_j},
          {"cpu_utilization", s.cpu_utilization}};
}

nlohmann::json to_json(const SeedSummary& s) {
  nlohmann::json slices = nlohmann::json::array();
  for (const WindowStats& w : s.slices) slices.push_back(to_json(w));
  return {{"seed", s.seed},
          {"steps", s.steps},
          {"episodes_completed", s.episodes_completed},
          {"final_window_start", s.window_start},
          {"final_mean_return", s.final_mean_return ? nlohmann::json(*s.final_mean_return) : nlohmann::json()},
          {"slices", slices},
          {"aggregate", to_json(s.aggregate)}};
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ContractError("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Spread spread(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  Spread s;
  s.median = quantile(v, 0.5);
  if (v.size() >= 2) s.iqr = quantile(v, 0.75) - quantile(v, 0.25);
  return s;
}

}  // namespace nslice::harness
