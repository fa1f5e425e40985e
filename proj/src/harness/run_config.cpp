// SPDX-License-Identifier: Apache-2.0

#include "nslice/harness/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nslice/errors.hpp"
#include "nslice/json_fields.hpp"

namespace nslice::harness {

RunConfig run_config_from_json(const nlohmann::json& doc) {
  RunConfig cfg;
  JsonFields root(doc, "");
  if (root.has("scenario")) cfg.scenario = env::scenario_from_json(root.claim("scenario"));
  if (root.has("agent")) cfg.agent = rl::agent_config_from_json(root.claim("agent"));
  if (root.has("run")) {
    JsonFields run(root.claim("run"), "run");
    run.read("seeds", cfg.seeds);
    std::string out = cfg.out_dir.string();
    run.read("out_dir", out);
    cfg.out_dir = out;
    run.read("flush_interval", cfg.flush_interval);
    run.read("checkpoint_interval", cfg.checkpoint_interval);
    run.read("smoothing_window", cfg.smoothing_window);
    run.read("workers", cfg.workers);
    run.finish();
  }
  root.finish();

  if (cfg.seeds.empty()) throw ConfigError("run.seeds", "at least one seed is required");
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.seeds[i] == cfg.seeds[j]) throw ConfigError("run.seeds", "duplicate seed " + std::to_string(cfg.seeds[i]));
    }
  }
  if (cfg.out_dir.empty()) throw ConfigError("run.out_dir", "must not be empty");
  if (cfg.flush_interval == 0) throw ConfigError("run.flush_interval", "must be positive");
  if (cfg.smoothing_window == 0) throw ConfigError("run.smoothing_window", "must be positive");
  if (cfg.workers == 0) throw ConfigError("run.workers", "must be positive");
  return cfg;
}

nlohmann::json to_json(const RunConfig& config) {
  return {{"scenario", env::to_json(config.scenario)},
          {"agent", rl::to_json(config.agent)},
          {"run",
           {{"seeds", config.seeds},
            {"out_dir", config.out_dir.string()},
            {"flush_interval", config.flush_interval},
            {"checkpoint_interval", config.checkpoint_interval},
            {"smoothing_window", config.smoothing_window},
            {"workers", config.workers}}}};
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError(path, "empty path component");
    if (node->is_null()) *node = nlohmann::json::object();
    nlohmann::json* child = nullptr;
    if (node->is_array()) {
      // Numeric components index existing array elements.
      std::size_t index = 0;
      const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
      if (ec != std::errc() || end != key.data() + key.size() || index >= node->size()) {
        throw ConfigError(path, "'" + key + "' is not a valid index");
      }
      child = &(*node)[index];
    } else if (node->is_object()) {
      child = &(*node)[key];
    } else {
      throw ConfigError(path, "'" + key + "' is not inside an object or array");
    }
    if (dot == std::string::npos) {
      *child = std::move(value);
      return;
    }
    node = child;
    start = dot + 1;
  }
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  nlohmann::json doc = nlohmann::json::parse(text.str(), nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError("<root>", path.string() + " is not valid JSON");
  for (const std::string& o : overrides) apply_override(doc, o);
  return run_config_from_json(doc);
}

}  // namespace nslice::harness
