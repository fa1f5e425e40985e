// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nslice/harness/metrics.hpp"

namespace nslice::harness {

/// Centered moving average. Each output averages the `window` samples
/// centred on it, truncated at the ends of the series.
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Series sharing a colour, e.g. the seeds of one configuration.
struct SeriesGroup {
  std::string label;
  std::vector<Series> members;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool member_lines = true;  // one polyline per member
  bool median = true;        // pointwise median of each group with 2+ members
  bool band = false;         // pointwise interquartile band of each group
  std::size_t max_points = 1500;
};

/// All groups on shared axes, SVG 1.1.
std::string render_svg(const std::vector<SeriesGroup>& groups, const ChartSpec& spec);

/// Pointwise median across series of equal length.
std::vector<double> pointwise_quantile(const std::vector<Series>& series, double q);

/// Units shown on the y axis for a metrics column ("" when dimensionless).
/// Throws ContractError for an unknown column.
std::string metric_units(const std::string& column);
double metric_value(const MetricsRow& row, const std::string& column);

/// Per-seed series of one column for one slice (or the aggregate).
std::vector<Series> metric_series(const std::vector<MetricsRow>& rows, const std::string& column, int slice_id);

}  // namespace nslice::harness
