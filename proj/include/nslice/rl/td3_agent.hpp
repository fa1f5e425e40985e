// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nslice/env/slicing_env.hpp"
#include "nslice/nn/mlp.hpp"
#include "nslice/nn/optimizer.hpp"
#include "nslice/rl/agent_config.hpp"
#include "nslice/rl/replay_buffer.hpp"
#include "nslice/traffic/rng.hpp"

namespace nslice::rl {

/// Actor, twin critics, their targets, and optimiser state. DDPG keeps the
/// second critic allocated but never reads or updates it.
struct AgentParams {
  nn::Mlp actor;
  nn::Mlp critic1;
  nn::Mlp critic2;
  nn::Mlp actor_target;
  nn::Mlp critic1_target;
  nn::Mlp critic2_target;
  nn::AdamState actor_opt;
  nn::AdamState critic1_opt;
  nn::AdamState critic2_opt;
};

/// Fresh networks for the given dimensions; targets are exact copies.
/// Each network draws from its own stream so re-seeding one leaves the
/// others unchanged.
AgentParams init_agent_params(std::size_t state_dim, std::size_t action_dim, const AgentConfig& config,
                              std::uint64_t seed);

/// Re-initialises only the second critic and its target from another seed.
void reseed_second_critic(AgentParams& params, const AgentConfig& config, std::uint64_t seed);

struct AgentStreams {
  traffic::RngStream exploration;
  traffic::RngStream warmup;
  traffic::RngStream target_noise;
  traffic::RngStream replay;

  static AgentStreams derive(std::uint64_t seed);
};

/// r + discount * (1 - done) * min(q1, q2).
double td_target(double reward, double discount, bool done, double q1, double q2);
double td_target(double reward, double discount, bool done, double q1);

/// clamp(target_action + clamp(noise, -clip, clip), min_action, max_action).
double smoothed_action(double target_action, double noise, double clip, double min_action, double max_action);

/// clamp(policy_action + noise, min_action, max_action).
double explored_action(double policy_action, double noise, double min_action, double max_action);

/// dQ/da for every batch row, written into `grad` (same shape as `actions`).
using ActionGradient = std::function<void(const nn::Matrix& actions, nn::Matrix& grad)>;

/// Scratch buffers for deterministic_policy_step().
struct PolicyStepScratch {
  nn::ForwardTrace trace;
  nn::Matrix actions;
  nn::Matrix action_grad;
  nn::Matrix upstream;
  nn::GradientSet grads;
  nn::BackwardScratch backward;
};

/// One ascent step on the batch-mean of Q(s, pi(s)). The actor output y is
/// mapped to actions as mid + half * y; the chain rule runs through
/// `dq_da` and the actor's backward pass, then one optimiser step.
void deterministic_policy_step(nn::Mlp& actor, nn::AdamState& optimizer, const nn::Matrix& states,
                               double action_mid, double action_half, const ActionGradient& dq_da,
                               PolicyStepScratch& scratch);

struct UpdateStats {
  bool trained = false;
  double critic_loss = 0.0;
  bool actor_updated = false;
};

/// TD3 learner; DDPG when config.algorithm == ddpg (single critic, actor
/// and targets updated on every step, no target-action smoothing).
class Td3Agent {
 public:
  Td3Agent(std::size_t state_dim, std::size_t action_dim, AgentConfig config, std::uint64_t seed);
  Td3Agent(std::size_t state_dim, std::size_t action_dim, AgentConfig config, AgentParams params,
           AgentStreams streams, std::uint64_t update_count = 0);

  std::vector<double> select_action(std::span<const double> state, bool explore);
  std::vector<double> warmup_action(const env::Box& action_space);

  /// Target-policy actions for a batch of next states (smoothed for TD3).
  void smooth_target_actions(const nn::Matrix& next_states, nn::Matrix& out);
  void td_targets(const Batch& batch, std::vector<double>& out);

  /// Mean-squared TD error of each critic against `targets`, summed, then
  /// one optimiser step per critic. Targets are read-only here.
  /// Throws TrainingError when the loss is not finite.
  double critic_update(const Batch& batch, std::span<const double> targets);

  /// Deterministic policy gradient through critic1, then Polyak averaging of
  /// every target network.
  void actor_update(const Batch& batch);

  /// Sample, TD targets, critic step, and the delayed actor step. Does
  /// nothing while the buffer holds fewer than batch_size transitions.
  UpdateStats update(const ReplayBuffer& buffer);

  const AgentConfig& config() const noexcept { return config_; }
  const AgentParams& params() const noexcept { return params_; }
  AgentParams& params() noexcept { return params_; }
  const AgentStreams& streams() const noexcept { return streams_; }
  std::uint64_t update_count() const noexcept { return update_count_; }
  std::size_t state_dim() const noexcept { return state_dim_; }
  std::size_t action_dim() const noexcept { return action_dim_; }

 private:
  double action_mid() const noexcept { return 0.5 * (config_.max_action + config_.min_action); }
  double action_half() const noexcept { return 0.5 * (config_.max_action - config_.min_action); }
  void join_state_action(const nn::Matrix& states, const nn::Matrix& actions, nn::Matrix& out) const;

  std::size_t state_dim_;
  std::size_t action_dim_;
  AgentConfig config_;
  AgentParams params_;
  AgentStreams streams_;
  std::uint64_t update_count_ = 0;

  Batch batch_;
  std::vector<double> targets_;
  nn::Matrix next_actions_;
  nn::Matrix joined_;
  nn::ForwardTrace trace_a_;
  nn::ForwardTrace trace_b_;
  nn::Matrix upstream_;
  nn::GradientSet grads_;
  nn::BackwardScratch scratch_;
  PolicyStepScratch policy_;
};

}  // namespace nslice::rl
