// SPDX-License-Identifier: Apache-2.0

#include "nslice/harness/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "nslice/errors.hpp"
#include "nslice/harness/exit_codes.hpp"
#include "nslice/harness/metrics.hpp"
#include "nslice/harness/render.hpp"
#include "nslice/rl/checkpoint.hpp"
#include "nslice/rl/trainer.hpp"

namespace nslice::harness {
namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json to_json(const Spread& s) {
  return {{"median", std::isfinite(s.median) ? nlohmann::json(s.median) : nlohmann::json()},
          {"iqr", s.iqr ? nlohmann::json(*s.iqr) : nlohmann::json()}};
}

Spread spread_or_empty(const std::vector<double>& values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::nullopt};
  return spread(values);
}

std::string cell(const Spread& s) {
  if (!std::isfinite(s.median)) return "n/a";
  return fmt::format("{:.4g} ± {}", s.median, s.iqr ? fmt::format("{:.3g}", *s.iqr) : std::string("n/a"));
}

}  // namespace

SeedRun train_seed(const RunConfig& config, std::uint64_t seed, const fs::path& seed_dir) {
  ensure_dir(seed_dir);
  rl::Trainer trainer(config.scenario, config.agent, seed);
  MetricsWriter writer(seed_dir / "metrics.csv", config.flush_interval);
  SummaryBuilder builder(seed, config.scenario.slices.size(), config.agent.max_timesteps);

  while (!trainer.finished()) {
    rl::StepMetrics m;
    try {
      m = trainer.train_step();
    } catch (const TrainingError&) {
      writer.flush();
      rl::save_checkpoint(rl::make_checkpoint(config.scenario, trainer.agent(), seed, trainer.t(), trainer.episode()),
                          seed_dir / "checkpoint_failure.json");
      throw;
    }
    const std::vector<MetricsRow> rows = rows_for_step(m, seed);
    writer.write_step(rows);
    builder.add(rows, m.done, m.episode_return);
    if (config.checkpoint_interval > 0 && trainer.t() % config.checkpoint_interval == 0 && !trainer.finished()) {
      rl::save_checkpoint(rl::make_checkpoint(config.scenario, trainer.agent(), seed, trainer.t(), trainer.episode()),
                          seed_dir / fmt::format("checkpoint_step_{}.json", trainer.t()));
    }
  }
  writer.flush();
  rl::save_checkpoint(rl::make_checkpoint(config.scenario, trainer.agent(), seed, trainer.t(), trainer.episode()),
                      seed_dir / "checkpoint.json");
  return {builder.finish(), builder.aggregate_rows()};
}

nlohmann::json summary_json(const RunConfig& config, const std::vector<SeedSummary>& seeds) {
  nlohmann::json per_seed = nlohmann::json::array();
  for (const SeedSummary& s : seeds) per_seed.push_back(to_json(s));
  const CompareRow row = compare_row(std::string(rl::to_string(config.agent.algorithm)), seeds);
  nlohmann::json slices = nlohmann::json::array();
  for (std::size_t i = 0; i < row.slice_violation_rate.size(); ++i) {
    slices.push_back({{"slice_id", config.scenario.slices[i].slice_id},
                      {"violation_rate", to_json(row.slice_violation_rate[i])},
                      {"admission_rate", to_json(row.slice_admission_rate[i])},
                      {"cpu_utilization", to_json(row.slice_cpu_utilization[i])}});
  }
  return {{"schema_version", kSummarySchemaVersion},
          {"metrics_schema_version", kMetricsSchemaVersion},
          {"algorithm", rl::to_string(config.agent.algorithm)},
          {"max_timesteps", config.agent.max_timesteps},
          {"final_fraction", kFinalFraction},
          {"seeds", per_seed},
          {"across_seeds",
           {{"final_mean_return", to_json(row.final_return)},
            {"admission_rate", to_json(row.admission_rate)},
            {"violation_rate", to_json(row.violation_rate)},
            {"energy_j", to_json(row.energy_j)},
            {"cpu_utilization", to_json(row.cpu_utilization)},
            {"slices", slices}}}};
}

std::vector<SeedRun> train_all(const RunConfig& config, std::ostream& log) {
  ensure_dir(config.out_dir);
  write_text(config.out_dir / "config.json", to_json(config).dump(2) + "\n");

  const std::size_t n = config.seeds.size();
  std::vector<SeedRun> runs(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        runs[i] = train_seed(config, config.seeds[i], config.out_dir / fmt::format("seed_{}", config.seeds[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(config.workers, n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<std::pair<std::uint64_t, fs::path>> files;
  std::vector<SeedSummary> summaries;
  for (std::size_t i = 0; i < n; ++i) {
    files.emplace_back(config.seeds[i], config.out_dir / fmt::format("seed_{}", config.seeds[i]) / "metrics.csv");
    summaries.push_back(runs[i].summary);
    const SeedSummary& s = runs[i].summary;
    log << fmt::format("seed {}: {} steps, {} episodes, final mean return {}\n", s.seed, s.steps,
                       s.episodes_completed, s.final_mean_return ? fmt::format("{:.4f}", *s.final_mean_return) : "n/a");
  }
  merge_metrics(files, config.out_dir / "metrics.csv");
  write_text(config.out_dir / "summary.json", summary_json(config, summaries).dump(2) + "\n");
  return runs;
}

EvaluateResult evaluate(const EvaluateOptions& options, std::ostream& log) {
  const rl::Checkpoint cp = rl::load_checkpoint(options.checkpoint);
  const env::ScenarioConfig scenario = options.scenario.value_or(cp.scenario);
  const std::size_t obs = env::SlicingEnv::kFieldsPerSlice * scenario.slices.size();
  if (obs != cp.state_dim || scenario.slices.size() != cp.action_dim) {
    throw DimensionMismatchError(fmt::format(
        "checkpoint policy expects {} observations and {} actions but the scenario has {} slices ({} observations, "
        "{} actions)",
        cp.state_dim, cp.action_dim, scenario.slices.size(), obs, scenario.slices.size()));
  }

  ensure_dir(options.out_dir);
  const std::vector<rl::StepMetrics> steps =
      rl::evaluate_policy(scenario, cp.params.actor, cp.config, options.seed, options.episodes);

  EvaluateResult result;
  SummaryBuilder builder(options.seed, scenario.slices.size(), steps.size(), 0);
  {
    MetricsWriter writer(options.out_dir / "metrics.csv", std::numeric_limits<std::uint64_t>::max());
    for (const rl::StepMetrics& m : steps) {
      std::vector<MetricsRow> rows = rows_for_step(m, options.seed);
      writer.write_step(rows);
      builder.add(rows, m.done, m.episode_return);
      if (m.done) result.episode_returns.push_back(m.episode_return);
      result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    }
  }
  const SeedSummary s = builder.finish();
  double mean = 0.0;
  for (const double r : result.episode_returns) mean += r;
  nlohmann::json doc = {{"schema_version", kSummarySchemaVersion},
                        {"checkpoint", options.checkpoint.string()},
                        {"seed", options.seed},
                        {"episodes", options.episodes},
                        {"episode_returns", result.episode_returns},
                        {"mean_return", result.episode_returns.empty()
                                            ? nlohmann::json()
                                            : nlohmann::json(mean / static_cast<double>(result.episode_returns.size()))},
                        {"steps", to_json(s)}};
  write_text(options.out_dir / "summary.json", doc.dump(2) + "\n");
  log << fmt::format("evaluated {} episodes ({} steps)\n", options.episodes, steps.size());
  return result;
}

CompareRow compare_row(const std::string& label, const std::vector<SeedSummary>& seeds) {
  CompareRow row;
  row.label = label;
  std::vector<double> ret, adm, viol, energy, util;
  std::size_t num_slices = seeds.empty() ? 0 : seeds.front().slices.size();
  std::vector<std::vector<double>> sv(num_slices), sa(num_slices), su(num_slices);
  for (const SeedSummary& s : seeds) {
    if (s.final_mean_return) ret.push_back(*s.final_mean_return);
    adm.push_back(s.aggregate.admission_rate);
    viol.push_back(s.aggregate.violation_rate);
    energy.push_back(s.aggregate.energy_j);
    util.push_back(s.aggregate.cpu_utilization);
    for (std::size_t i = 0; i < num_slices && i < s.slices.size(); ++i) {
      sv[i].push_back(s.slices[i].violation_rate);
      sa[i].push_back(s.slices[i].admission_rate);
      su[i].push_back(s.slices[i].cpu_utilization);
    }
  }
  row.final_return = spread_or_empty(ret);
  row.admission_rate = spread_or_empty(adm);
  row.violation_rate = spread_or_empty(viol);
  row.energy_j = spread_or_empty(energy);
  row.cpu_utilization = spread_or_empty(util);
  for (std::size_t i = 0; i < num_slices; ++i) {
    row.slice_violation_rate.push_back(spread_or_empty(sv[i]));
    row.slice_admission_rate.push_back(spread_or_empty(sa[i]));
    row.slice_cpu_utilization.push_back(spread_or_empty(su[i]));
  }
  return row;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  const std::size_t slices = rows.empty() ? 0 : rows.front().slice_violation_rate.size();
  std::string head = "| rank | config | final return | admission rate | QoS violation | energy (J) | CPU utilization |";
  std::string rule = "|---|---|---|---|---|---|---|";
  for (std::size_t i = 0; i < slices; ++i) {
    head += fmt::format(" slice {0} admission | slice {0} violation | slice {0} CPU utilization |", i);
    rule += "---|---|---|";
  }
  std::string out = head + "\n" + rule + "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const CompareRow& c = rows[r];
    out += fmt::format("| {} | {} | {} | {} | {} | {} | {} |", r + 1, c.label, cell(c.final_return),
                       cell(c.admission_rate), cell(c.violation_rate), cell(c.energy_j), cell(c.cpu_utilization));
    for (std::size_t i = 0; i < slices; ++i) {
      out += fmt::format(" {} | {} | {} |", cell(c.slice_admission_rate[i]), cell(c.slice_violation_rate[i]),
                         cell(c.slice_cpu_utilization[i]));
    }
    out += "\n";
  }
  return out;
}

std::vector<CompareRow> compare(std::vector<CompareEntry> entries, const fs::path& out_dir, std::ostream& log) {
  if (entries.size() < 2) throw ConfigError("compare", "at least two configurations are required");
  const nlohmann::json reference = env::to_json(entries.front().config.scenario);
  for (const CompareEntry& e : entries) {
    if (env::to_json(e.config.scenario) != reference) {
      throw ScenarioMismatchError("configuration '" + e.label + "' describes a different scenario than '" +
                                  entries.front().label + "'");
    }
  }
  std::map<std::string, int> seen;
  for (CompareEntry& e : entries) {
    const int count = ++seen[e.label];
    if (count > 1) e.label += fmt::format("-{}", count);
  }

  ensure_dir(out_dir);
  std::vector<CompareRow> rows;
  std::vector<std::vector<SeedRun>> runs;
  for (CompareEntry& e : entries) {
    e.config.out_dir = out_dir / e.label;
    log << "running " << e.label << "\n";
    runs.push_back(train_all(e.config, log));
    std::vector<SeedSummary> summaries;
    for (const SeedRun& r : runs.back()) summaries.push_back(r.summary);
    rows.push_back(compare_row(e.label, summaries));
  }

  // Learning curves: per configuration, seeds form a band around the median.
  const std::size_t window = entries.front().config.smoothing_window;
  const std::vector<std::string> metrics{"reward", "admission_rate", "latency_ms", "qos_violation_flag",
                                         "energy_j", "cpu_utilization"};
  for (const std::string& metric : metrics) {
    std::vector<SeriesGroup> groups;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      SeriesGroup g{entries[k].label, {}};
      for (const SeedRun& r : runs[k]) {
        Series s{fmt::format("seed {}", r.summary.seed), {}, {}};
        for (const MetricsRow& row : r.aggregate_rows) {
          s.x.push_back(static_cast<double>(row.step));
          s.y.push_back(metric_value(row, metric));
        }
        s.y = moving_average(s.y, window);
        g.members.push_back(std::move(s));
      }
      groups.push_back(std::move(g));
    }
    const std::string units = metric_units(metric);
    ChartSpec spec{metric, "training step", units.empty() ? metric : metric + " (" + units + ")", false, true, true};
    write_text(out_dir / ("curve_" + metric + ".svg"), render_svg(groups, spec));
  }
  {
    std::vector<SeriesGroup> groups;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      SeriesGroup g{entries[k].label, {}};
      for (const SeedRun& r : runs[k]) {
        Series s{fmt::format("seed {}", r.summary.seed), {}, r.summary.episode_returns};
        for (const std::uint64_t t : r.summary.episode_end_steps) s.x.push_back(static_cast<double>(t));
        const std::size_t episode_window =
            std::max<std::size_t>(1, window / std::max<std::size_t>(1, entries[k].config.scenario.episode_length));
        s.y = moving_average(s.y, episode_window);
        g.members.push_back(std::move(s));
      }
      groups.push_back(std::move(g));
    }
    ChartSpec spec{"episodic return", "training step", "return", false, true, true};
    write_text(out_dir / "curve_return.svg", render_svg(groups, spec));
  }

  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    const double x = std::isfinite(a.final_return.median) ? a.final_return.median : -INFINITY;
    const double y = std::isfinite(b.final_return.median) ? b.final_return.median : -INFINITY;
    return x > y;
  });

  const std::string table = format_compare_table(rows);
  write_text(out_dir / "compare.md", table);
  nlohmann::json doc = nlohmann::json::array();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const CompareRow& c = rows[r];
    nlohmann::json slices = nlohmann::json::array();
    for (std::size_t i = 0; i < c.slice_violation_rate.size(); ++i) {
      slices.push_back({{"admission_rate", to_json(c.slice_admission_rate[i])},
                        {"violation_rate", to_json(c.slice_violation_rate[i])},
                        {"cpu_utilization", to_json(c.slice_cpu_utilization[i])}});
    }
    doc.push_back({{"rank", r + 1},
                   {"label", c.label},
                   {"final_return", to_json(c.final_return)},
                   {"admission_rate", to_json(c.admission_rate)},
                   {"violation_rate", to_json(c.violation_rate)},
                   {"energy_j", to_json(c.energy_j)},
                   {"cpu_utilization", to_json(c.cpu_utilization)},
                   {"slices", slices}});
  }
  write_text(out_dir / "compare.json",
             nlohmann::json{{"schema_version", kSummarySchemaVersion}, {"rows", doc}}.dump(2) + "\n");
  log << table;
  return rows;
}

void render(const RenderOptions& options) {
  const std::vector<MetricsRow> rows = read_metrics_csv(options.csv);
  const std::string units = metric_units(options.metric);
  std::vector<Series> series = metric_series(rows, options.metric, options.slice_id);
  for (Series& s : series) s.y = moving_average(s.y, options.window);
  const std::string scope = options.slice_id == kAggregateSliceId ? "all slices" : fmt::format("slice {}", options.slice_id);
  ChartSpec spec{fmt::format("{} ({}, window {})", options.metric, scope, options.window), "step",
                 units.empty() ? options.metric : options.metric + " (" + units + ")"};
  if (options.out.has_parent_path()) ensure_dir(options.out.parent_path());
  write_text(options.out, render_svg({SeriesGroup{options.metric, std::move(series)}}, spec));
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const CheckpointError& e) {
    err << "checkpoint error: " << e.what() << "\n";
    return kCheckpoint;
  } catch (const TrainingError& e) {
    err << "training diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const DimensionMismatchError& e) {
    err << "dimension mismatch: " << e.what() << "\n";
    return kDimensionMismatch;
  } catch (const ScenarioMismatchError& e) {
    err << "scenario mismatch: " << e.what() << "\n";
    return kScenarioMismatch;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace nslice::harness
