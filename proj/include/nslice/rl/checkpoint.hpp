// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "nslice/env/scenario.hpp"
#include "nslice/rl/td3_agent.hpp"

namespace nslice::rl {

inline constexpr std::string_view kCheckpointFormat = "nslice-checkpoint";
inline constexpr int kCheckpointVersion = 1;

/// Everything needed to resume training or evaluate a policy. The replay
/// buffer is not included.
struct Checkpoint {
  env::ScenarioConfig scenario;
  AgentConfig config;
  std::size_t state_dim = 0;
  std::size_t action_dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::uint64_t episode = 0;
  std::uint64_t update_count = 0;
  AgentParams params;
  AgentStreams streams;
};

Checkpoint make_checkpoint(const env::ScenarioConfig& scenario, const Td3Agent& agent, std::uint64_t seed,
                           std::uint64_t step, std::uint64_t episode);
Td3Agent restore_agent(const Checkpoint& cp);

nlohmann::json to_json(const Checkpoint& cp);
/// Throws CheckpointError for malformed or mismatched documents.
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

/// Writes atomically via a temporary file. Throws IoError.
void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path);
/// Throws IoError when unreadable and CheckpointError when malformed.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace nslice::rl
