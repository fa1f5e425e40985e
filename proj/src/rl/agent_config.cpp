// SPDX-License-Identifier: Apache-2.0

#include "nslice/rl/agent_config.hpp"

#include <cmath>
#include <string>

#include "nslice/errors.hpp"
#include "nslice/json_fields.hpp"

namespace nslice::rl {

std::string_view to_string(Algorithm a) { return a == Algorithm::td3 ? "td3" : "ddpg"; }

Algorithm algorithm_from_string(std::string_view name, std::string_view field) {
  if (name == "td3") return Algorithm::td3;
  if (name == "ddpg") return Algorithm::ddpg;
  throw ConfigError(std::string(field), "expected 'td3' or 'ddpg', got '" + std::string(name) + "'");
}

void validate(const AgentConfig& c) {
  auto require = [](bool ok, const char* field, const char* message) {
    if (!ok) throw ConfigError(field, message);
  };
  require(c.discount >= 0.0 && c.discount <= 1.0, "discount", "must lie in [0, 1]");
  require(c.tau > 0.0 && c.tau <= 1.0, "tau", "must lie in (0, 1]");
  require(c.policy_freq >= 1, "policy_freq", "must be >= 1");
  require(std::isfinite(c.policy_noise) && c.policy_noise >= 0.0, "policy_noise", "must be >= 0");
  require(std::isfinite(c.noise_clip) && c.noise_clip >= 0.0, "noise_clip", "must be >= 0");
  require(std::isfinite(c.exploration_noise) && c.exploration_noise >= 0.0, "exploration_noise", "must be >= 0");
  require(c.batch_size >= 1, "batch_size", "must be >= 1");
  require(std::isfinite(c.min_action) && std::isfinite(c.max_action) && c.min_action < c.max_action, "max_action",
          "action bounds must be finite with min_action < max_action");
  require(std::isfinite(c.actor_lr) && c.actor_lr > 0.0, "actor_lr", "must be > 0");
  require(std::isfinite(c.critic_lr) && c.critic_lr > 0.0, "critic_lr", "must be > 0");
  require(!c.hidden_sizes.empty(), "hidden_sizes", "at least one hidden layer is required");
  for (const std::size_t h : c.hidden_sizes) require(h >= 1, "hidden_sizes", "layer widths must be >= 1");
  require(c.replay_capacity >= 1, "replay_capacity", "must be >= 1");
}

AgentConfig agent_config_from_json(const nlohmann::json& doc) {
  AgentConfig c;
  JsonFields f(doc, "agent");
  std::string algorithm(to_string(c.algorithm));
  f.read("algorithm", algorithm);
  c.algorithm = algorithm_from_string(algorithm);
  f.read("discount", c.discount);
  f.read("tau", c.tau);
  f.read("policy_freq", c.policy_freq);
  f.read("policy_noise", c.policy_noise);
  f.read("noise_clip", c.noise_clip);
  f.read("exploration_noise", c.exploration_noise);
  f.read("batch_size", c.batch_size);
  f.read("start_timesteps", c.start_timesteps);
  f.read("max_timesteps", c.max_timesteps);
  f.read("min_action", c.min_action);
  f.read("max_action", c.max_action);
  f.read("actor_lr", c.actor_lr);
  f.read("critic_lr", c.critic_lr);
  f.read("hidden_sizes", c.hidden_sizes);
  std::string optimizer(nn::to_string(c.optimizer));
  f.read("optimizer", optimizer);
  if (optimizer != "adam" && optimizer != "sgd") throw ConfigError("agent.optimizer", "expected 'adam' or 'sgd'");
  c.optimizer = nn::optimizer_from_string(optimizer);
  f.read("replay_capacity", c.replay_capacity);
  f.finish();
  try {
    validate(c);
  } catch (const ConfigError& e) {
    throw ConfigError("agent." + e.field(), e.message());
  }
  return c;
}

nlohmann::json to_json(const AgentConfig& c) {
  return {{"algorithm", std::string(to_string(c.algorithm))},
          {"discount", c.discount},
          {"tau", c.tau},
          {"policy_freq", c.policy_freq},
          {"policy_noise", c.policy_noise},
          {"noise_clip", c.noise_clip},
          {"exploration_noise", c.exploration_noise},
          {"batch_size", c.batch_size},
          {"start_timesteps", c.start_timesteps},
          {"max_timesteps", c.max_timesteps},
          {"min_action", c.min_action},
          {"max_action", c.max_action},
          {"actor_lr", c.actor_lr},
          {"critic_lr", c.critic_lr},
          {"hidden_sizes", c.hidden_sizes},
          {"optimizer", std::string(nn::to_string(c.optimizer))},
          {"replay_capacity", c.replay_capacity}};
}

}  // namespace nslice::rl
