// SPDX-License-Identifier: Apache-2.0

#include "nslice/harness/render.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "nslice/errors.hpp"
#include "nslice/harness/summary.hpp"

namespace nslice::harness {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::size_t stride_for(std::size_t n, std::size_t max_points) {
  return max_points == 0 || n <= max_points ? 1 : (n + max_points - 1) / max_points;
}

std::string points(const std::vector<double>& x, const std::vector<double>& y, const Frame& f, std::size_t stride) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); i += stride) {
    out += fmt::format("{:.2f},{:.2f} ", f.px(x[i]), f.py(y[i]));
  }
  if (!x.empty() && (x.size() - 1) % stride != 0) out += fmt::format("{:.2f},{:.2f}", f.px(x.back()), f.py(y.back()));
  return out;
}

}  // namespace

std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
  if (window == 0) throw ContractError("smoothing window must be positive");
  const std::size_t n = values.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];
  const std::size_t before = (window - 1) / 2;
  const std::size_t after = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= before ? i - before : 0;
    const std::size_t hi = std::min(n, i + after + 1);
    out[i] = window == 1 ? values[i] : (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

std::vector<double> pointwise_quantile(const std::vector<Series>& series, double q) {
  if (series.empty()) return {};
  std::size_t n = series.front().y.size();
  for (const Series& s : series) n = std::min(n, s.y.size());
  std::vector<double> out(n);
  std::vector<double> column(series.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < series.size(); ++k) column[k] = series[k].y[i];
    out[i] = quantile(column, q);
  }
  return out;
}

std::string render_svg(const std::vector<SeriesGroup>& groups, const ChartSpec& spec) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const SeriesGroup& g : groups) {
    for (const Series& s : g.members) {
      if (s.x.size() != s.y.size()) throw ContractError("series '" + s.label + "' has mismatched x and y lengths");
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        x0 = std::min(x0, s.x[i]);
        x1 = std::max(x1, s.x[i]);
        y0 = std::min(y0, s.y[i]);
        y1 = std::max(y1, s.y[i]);
      }
    }
  }
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    const double pad = y0 == 0.0 ? 1.0 : std::abs(y0) * 0.1;
    y0 -= pad;
    y1 += pad;
  }
  const Frame f{x0, x1, y0, y1};

  std::string svg = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
                     (kLeft + kWidth - kRight) / 2, escape(spec.title));

  const double left = kLeft, right = kWidth - kRight, top = kTop, bottom = kHeight - kBottom;
  svg += fmt::format("<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\"/>\n", left, right, bottom);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top, bottom);
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = y0 + (y1 - y0) * i / 5.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n",
                       f.px(xv), bottom + 16, xv);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n",
                       left - 6, f.py(yv) + 4, yv);
    svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#dddddd\"/>\n", left,
                       f.py(yv), right, f.py(yv));
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
                     (left + right) / 2, kHeight - 16, escape(spec.x_label));
  svg += fmt::format(
      "<text x=\"18\" y=\"{0:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      "transform=\"rotate(-90 18 {0:.1f})\">{1}</text>\n",
      (top + bottom) / 2, escape(spec.y_label));

  std::size_t legend = 0;
  auto add_legend = [&](const std::string& label, const char* color) {
    ++legend;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{}\">{}</text>\n",
                       right + 10, top + 14.0 * static_cast<double>(legend), color, escape(label));
  };

  std::size_t color_index = 0;
  for (const SeriesGroup& g : groups) {
    if (g.members.empty()) continue;
    const std::vector<double>& gx = g.members.front().x;
    const std::size_t stride = stride_for(gx.size(), spec.max_points);
    const bool many = g.members.size() >= 2;
    const char* group_color = groups.size() == 1 ? "black" : kPalette[color_index % std::size(kPalette)];

    if (spec.band && many) {
      const std::vector<double> lo = pointwise_quantile(g.members, 0.25);
      const std::vector<double> hi = pointwise_quantile(g.members, 0.75);
      std::vector<double> xs(gx.begin(), gx.begin() + static_cast<std::ptrdiff_t>(lo.size()));
      std::vector<double> rx(xs.rbegin(), xs.rend()), rlo(lo.rbegin(), lo.rend());
      svg += fmt::format("<polygon points=\"{}{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n",
                         points(xs, hi, f, stride), points(rx, rlo, f, stride), group_color);
    }
    if (spec.member_lines || !many) {
      for (const Series& s : g.members) {
        const char* color = groups.size() == 1 ? kPalette[color_index % std::size(kPalette)] : group_color;
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" stroke-opacity=\"0.8\" points=\"{}\"/>\n",
                           color, points(s.x, s.y, f, stride_for(s.x.size(), spec.max_points)));
        if (groups.size() == 1) {
          add_legend(s.label, color);
          ++color_index;
        }
      }
    }
    if (spec.median && many) {
      const std::vector<double> med = pointwise_quantile(g.members, 0.5);
      std::vector<double> xs(gx.begin(), gx.begin() + static_cast<std::ptrdiff_t>(med.size()));
      svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", group_color,
                         points(xs, med, f, stride));
      add_legend(groups.size() == 1 ? "median" : g.label + " (median)", group_color);
    } else if (groups.size() > 1) {
      add_legend(g.label, group_color);
    }
    if (groups.size() > 1) ++color_index;
  }
  svg += "</svg>\n";
  return svg;
}

std::string metric_units(const std::string& column) {
  static const std::map<std::string, std::string> units{
      {"arrived", "UEs"},       {"admitted", "UEs"},         {"admission_rate", "fraction"},
      {"latency_ms", "ms"},     {"qos_violation_flag", "slices"}, {"energy_j", "J"},
      {"cpu_alloc", "MOPTS"},   {"cpu_used", "MOPTS"},       {"cpu_utilization", "fraction"},
      {"vnf_count", "VNFs"},    {"reward", ""},              {"cost_total", "per UE"}};
  const auto it = units.find(column);
  if (it == units.end()) throw ContractError("unknown metrics column '" + column + "'");
  return it->second;
}

double metric_value(const MetricsRow& r, const std::string& column) {
  if (column == "arrived") return static_cast<double>(r.arrived);
  if (column == "admitted") return static_cast<double>(r.admitted);
  if (column == "admission_rate") return r.admission_rate;
  if (column == "latency_ms") return r.latency_ms;
  if (column == "qos_violation_flag") return static_cast<double>(r.qos_violation_flag);
  if (column == "energy_j") return r.energy_j;
  if (column == "cpu_alloc") return r.cpu_alloc;
  if (column == "cpu_used") return r.cpu_used;
  if (column == "cpu_utilization") return r.cpu_utilization;
  if (column == "vnf_count") return static_cast<double>(r.vnf_count);
  if (column == "reward") return r.reward;
  if (column == "cost_total") return r.cost_total;
  throw ContractError("unknown metrics column '" + column + "'");
}

std::vector<Series> metric_series(const std::vector<MetricsRow>& rows, const std::string& column, int slice_id) {
  std::map<std::uint64_t, Series> by_seed;
  for (const MetricsRow& r : rows) {
    if (r.slice_id != slice_id) continue;
    Series& s = by_seed[r.seed];
    if (s.label.empty()) s.label = "seed " + std::to_string(r.seed);
    s.x.push_back(static_cast<double>(r.step));
    s.y.push_back(metric_value(r, column));
  }
  std::vector<Series> out;
  for (auto& [seed, s] : by_seed) out.push_back(std::move(s));
  return out;
}

}  // namespace nslice::harness
