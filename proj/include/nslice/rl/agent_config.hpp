// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nslice/nn/optimizer.hpp"

namespace nslice::rl {

enum class Algorithm { td3, ddpg };

std::string_view to_string(Algorithm a);
/// Throws ConfigError for unknown names.
Algorithm algorithm_from_string(std::string_view name, std::string_view field = "agent.algorithm");

/// Training hyperparameters. Defaults follow the published TD3 slicing
/// setup (warm-up 20000, batch 128, policy delay 2, smoothing noise 0.2
/// clipped at 0.5, exploration noise 0.1, tau 0.005, discount 0.99).
/// Noise scales are in units of max_action.
struct AgentConfig {
  Algorithm algorithm = Algorithm::td3;
  double discount = 0.99;
  double tau = 0.005;
  int policy_freq = 2;
  double policy_noise = 0.2;
  double noise_clip = 0.5;
  double exploration_noise = 0.1;
  std::size_t batch_size = 128;
  std::uint64_t start_timesteps = 20000;
  std::uint64_t max_timesteps = 200000;
  double min_action = -1.0;
  double max_action = 1.0;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  std::vector<std::size_t> hidden_sizes{64, 64};
  nn::OptimizerKind optimizer = nn::OptimizerKind::adam;
  std::size_t replay_capacity = 1000000;

  bool twin_critics() const noexcept { return algorithm == Algorithm::td3; }
  bool target_smoothing() const noexcept { return algorithm == Algorithm::td3; }
  /// DDPG updates the actor on every critic update.
  int effective_policy_freq() const noexcept { return algorithm == Algorithm::ddpg ? 1 : policy_freq; }
};

/// Throws ConfigError naming the offending field.
void validate(const AgentConfig& config);

AgentConfig agent_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const AgentConfig& config);

}  // namespace nslice::rl
