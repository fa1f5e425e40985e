// SPDX-License-Identifier: Apache-2.0

#include "nslice/harness/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "nslice/errors.hpp"

namespace nslice::harness {
namespace {

constexpr std::string_view kHeader =
    "step,episode,seed,slice_id,arrived,admitted,admission_rate,latency_ms,qos_violation_flag,energy_j,"
    "cpu_alloc,cpu_used,cpu_utilization,vnf_count,reward,cost_total";
constexpr std::size_t kColumns = 16;

double rate(double num, double den, double empty) { return den > 0.0 ? num / den : empty; }

template <typename T>
T parse_field(std::string_view text, std::size_t line, std::size_t column) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, fmt::format("column {} ('{}') is not a valid number", column + 1, text));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ParseError(line, fmt::format("column {} is not finite", column + 1));
  }
  return value;
}

}  // namespace

std::string_view metrics_header() { return kHeader; }

std::vector<MetricsRow> rows_for_step(const rl::StepMetrics& step, std::uint64_t seed) {
  std::vector<MetricsRow> rows;
  rows.reserve(step.info.slices.size() + 1);
  for (const env::SliceStepInfo& s : step.info.slices) {
    MetricsRow r;
    r.step = step.t;
    r.episode = step.episode;
    r.seed = seed;
    r.slice_id = s.slice_id;
    r.arrived = s.arrived;
    r.admitted = s.admitted;
    r.admission_rate = rate(s.admitted, s.arrived, 1.0);
    r.latency_ms = s.latency;
    r.qos_violation_flag = s.qos_violated ? 1 : 0;
    r.energy_j = s.energy;
    r.cpu_alloc = s.cpu_alloc;
    r.cpu_used = s.cpu_used;
    r.cpu_utilization = s.cpu_utilization;
    r.vnf_count = s.vnf_count;
    r.reward = step.reward;
    r.cost_total = step.info.cost;
    rows.push_back(r);
  }
  std::vector<double> ues;
  for (const env::SliceStepInfo& s : step.info.slices) ues.push_back(s.active_ues);
  rows.push_back(aggregate_row(rows, ues));
  return rows;
}

MetricsRow aggregate_row(const std::vector<MetricsRow>& slice_rows, const std::vector<double>& active_ues) {
  if (active_ues.size() != slice_rows.size()) throw ContractError("one UE weight per slice row is required");
  MetricsRow agg;
  agg.slice_id = kAggregateSliceId;
  if (slice_rows.empty()) return agg;
  agg.step = slice_rows.front().step;
  agg.episode = slice_rows.front().episode;
  agg.seed = slice_rows.front().seed;
  agg.reward = slice_rows.front().reward;
  agg.cost_total = slice_rows.front().cost_total;
  double latency_sum = 0.0;
  double weighted = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < slice_rows.size(); ++i) {
    const MetricsRow& r = slice_rows[i];
    agg.arrived += r.arrived;
    agg.admitted += r.admitted;
    agg.qos_violation_flag += r.qos_violation_flag;
    agg.energy_j += r.energy_j;
    agg.cpu_alloc += r.cpu_alloc;
    agg.cpu_used += r.cpu_used;
    agg.vnf_count += r.vnf_count;
    latency_sum += r.latency_ms;
    weighted += active_ues[i] * r.latency_ms;
    weight += active_ues[i];
  }
  agg.admission_rate = rate(static_cast<double>(agg.admitted), static_cast<double>(agg.arrived), 1.0);
  agg.cpu_utilization = rate(agg.cpu_used, agg.cpu_alloc, 0.0);
  agg.latency_ms = weight > 0.0 ? weighted / weight : latency_sum / static_cast<double>(slice_rows.size());
  return agg;
}

std::string format_row(const MetricsRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", r.step, r.episode, r.seed, r.slice_id,
                     r.arrived, r.admitted, r.admission_rate, r.latency_ms, r.qos_violation_flag, r.energy_j,
                     r.cpu_alloc, r.cpu_used, r.cpu_utilization, r.vnf_count, r.reward, r.cost_total);
}

MetricsRow parse_row(std::string_view line, std::size_t n) {
  std::vector<std::string_view> f;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (f.size() != kColumns) throw ParseError(n, fmt::format("expected {} columns, found {}", kColumns, f.size()));
  MetricsRow r;
  r.step = parse_field<std::uint64_t>(f[0], n, 0);
  r.episode = parse_field<std::uint64_t>(f[1], n, 1);
  r.seed = parse_field<std::uint64_t>(f[2], n, 2);
  r.slice_id = parse_field<int>(f[3], n, 3);
  r.arrived = parse_field<std::int64_t>(f[4], n, 4);
  r.admitted = parse_field<std::int64_t>(f[5], n, 5);
  r.admission_rate = parse_field<double>(f[6], n, 6);
  r.latency_ms = parse_field<double>(f[7], n, 7);
  r.qos_violation_flag = parse_field<std::int64_t>(f[8], n, 8);
  r.energy_j = parse_field<double>(f[9], n, 9);
  r.cpu_alloc = parse_field<double>(f[10], n, 10);
  r.cpu_used = parse_field<double>(f[11], n, 11);
  r.cpu_utilization = parse_field<double>(f[12], n, 12);
  r.vnf_count = parse_field<std::int64_t>(f[13], n, 13);
  r.reward = parse_field<double>(f[14], n, 14);
  r.cost_total = parse_field<double>(f[15], n, 15);
  return r;
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  if (line != kHeader) throw ParseError(1, "header does not match the metrics schema");
  std::vector<MetricsRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    rows.push_back(parse_row(line, n));
  }
  return rows;
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return read_metrics_csv(in);
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path, std::uint64_t flush_interval)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), flush_interval_(std::max<std::uint64_t>(1, flush_interval)) {
  if (!out_) throw IoError("cannot write " + path.string());
  pending_.append(kHeader);
  pending_.push_back('\n');
}

MetricsWriter::~MetricsWriter() {
  try {
    flush();
  } catch (const IoError&) {
  }
}

void MetricsWriter::write_step(const std::vector<MetricsRow>& rows) {
  for (const MetricsRow& r : rows) {
    pending_ += format_row(r);
    pending_.push_back('\n');
  }
  if (++steps_since_flush_ >= flush_interval_) flush();
}

void MetricsWriter::flush() {
  out_.write(pending_.data(), static_cast<std::streamsize>(pending_.size()));
  out_.flush();
  pending_.clear();
  steps_since_flush_ = 0;
  if (!out_) throw IoError("write failed for " + path_.string());
}

void merge_metrics(const std::vector<std::pair<std::uint64_t, std::filesystem::path>>& per_seed,
                   const std::filesystem::path& out) {
  auto ordered = per_seed;
  std::sort(ordered.begin(), ordered.end());
  std::ofstream dst(out, std::ios::binary | std::ios::trunc);
  if (!dst) throw IoError("cannot write " + out.string());
  dst << kHeader << '\n';
  for (const auto& [seed, path] : ordered) {
    std::ifstream src(path, std::ios::binary);
    if (!src) throw IoError("cannot read " + path.string());
    std::string line;
    std::getline(src, line);
    while (std::getline(src, line)) dst << line << '\n';
  }
  if (!dst) throw IoError("write failed for " + out.string());
}

}  // namespace nslice::harness
