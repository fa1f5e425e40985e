// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "nslice/env/slicing_env.hpp"
#include "nslice/rl/agent_config.hpp"
#include "nslice/rl/replay_buffer.hpp"
#include "nslice/rl/td3_agent.hpp"

namespace nslice::rl {

/// Seed of the environment for a given episode of a run.
std::uint64_t episode_seed(std::uint64_t run_seed, std::uint64_t episode);

struct StepMetrics {
  std::uint64_t t = 0;        // global step index, starting at 0
  std::uint64_t episode = 0;  // episode the step belongs to
  bool warmup = false;
  std::vector<double> action;
  double reward = 0.0;
  bool done = false;
  double episode_return = 0.0;  // running return including this step
  UpdateStats update;
  env::StepInfo info;
};

/// One agent, one environment, one replay buffer, driven one outer-loop
/// iteration at a time.
class Trainer {
 public:
  Trainer(env::ScenarioConfig scenario, AgentConfig config, std::uint64_t seed);
  /// Resumes from restored agent state with an empty replay buffer; the
  /// environment starts a fresh episode `episode`.
  Trainer(env::ScenarioConfig scenario, Td3Agent agent, std::uint64_t seed, std::uint64_t t,
          std::uint64_t episode);

  StepMetrics train_step();
  bool finished() const noexcept { return t_ >= agent_.config().max_timesteps; }

  std::uint64_t t() const noexcept { return t_; }
  std::uint64_t episode() const noexcept { return episode_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const env::SlicingEnv& env() const noexcept { return env_; }
  const Td3Agent& agent() const noexcept { return agent_; }
  Td3Agent& agent() noexcept { return agent_; }
  const ReplayBuffer& buffer() const noexcept { return buffer_; }

 private:
  env::SlicingEnv env_;
  Td3Agent agent_;
  ReplayBuffer buffer_;
  std::uint64_t seed_;
  std::uint64_t t_ = 0;
  std::uint64_t episode_ = 0;
  double episode_return_ = 0.0;
  std::vector<double> state_;
};

/// Greedy rollout of the actor with no exploration noise and no learning.
std::vector<StepMetrics> evaluate_policy(const env::ScenarioConfig& scenario, const nn::Mlp& actor,
                                         const AgentConfig& config, std::uint64_t seed, std::uint64_t episodes);

}  // namespace nslice::rl
