// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nslice/env/scenario.hpp"
#include "nslice/rl/agent_config.hpp"

namespace nslice::harness {

struct RunConfig {
  env::ScenarioConfig scenario = env::default_scenario();
  rl::AgentConfig agent;
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out_dir = "runs/default";
  std::uint64_t flush_interval = 1000;       // steps between metrics flushes
  std::uint64_t checkpoint_interval = 0;     // 0: only at the end
  std::size_t smoothing_window = 100;        // steps, for rendered curves
  std::size_t workers = 1;                   // seeds trained concurrently
};

/// Document layout: {"scenario": {...}, "agent": {...}, "run": {...}}; every
/// section and key is optional and unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);

/// Sets a dotted path ("agent.batch_size=64") in a config document. The value
/// is parsed as JSON when possible and taken as a string otherwise.
/// Throws ConfigError for a malformed override.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads a config file, applies overrides in order, validates.
/// Throws IoError or ConfigError.
RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace nslice::harness
