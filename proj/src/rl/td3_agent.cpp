// SPDX-License-Identifier: Apache-2.0

#include "nslice/rl/td3_agent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nslice/errors.hpp"

namespace nslice::rl {
namespace {

constexpr double kActorOutputScale = 1e-2;

std::vector<std::size_t> layer_sizes(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

std::vector<nn::Activation> hidden_then(std::size_t hidden_layers, nn::Activation last) {
  std::vector<nn::Activation> acts(hidden_layers, nn::Activation::relu);
  acts.push_back(last);
  return acts;
}

nn::Mlp make_critic(std::size_t state_dim, std::size_t action_dim, const AgentConfig& config,
                    traffic::RngStream rng) {
  return nn::init_params(layer_sizes(state_dim + action_dim, config.hidden_sizes, 1),
                         hidden_then(config.hidden_sizes.size(), nn::Activation::identity), rng);
}

}  // namespace

AgentParams init_agent_params(std::size_t state_dim, std::size_t action_dim, const AgentConfig& config,
                              std::uint64_t seed) {
  AgentParams p;
  traffic::RngStream actor_rng(seed, "init.actor");
  p.actor = nn::init_params(layer_sizes(state_dim, config.hidden_sizes, action_dim),
                            hidden_then(config.hidden_sizes.size(), nn::Activation::tanh), actor_rng,
                            kActorOutputScale);
  p.critic1 = make_critic(state_dim, action_dim, config, traffic::RngStream(seed, "init.critic1"));
  p.critic2 = make_critic(state_dim, action_dim, config, traffic::RngStream(seed, "init.critic2"));
  p.actor_target = p.actor;
  p.critic1_target = p.critic1;
  p.critic2_target = p.critic2;
  p.actor_opt = nn::make_optimizer(p.actor, config.actor_lr, config.optimizer);
  p.critic1_opt = nn::make_optimizer(p.critic1, config.critic_lr, config.optimizer);
  p.critic2_opt = nn::make_optimizer(p.critic2, config.critic_lr, config.optimizer);
  return p;
}

void reseed_second_critic(AgentParams& params, const AgentConfig& config, std::uint64_t seed) {
  const std::size_t in = params.critic2.input_size();
  const std::size_t action_dim = params.actor.output_size();
  params.critic2 = make_critic(in - action_dim, action_dim, config, traffic::RngStream(seed, "init.critic2"));
  params.critic2_target = params.critic2;
  params.critic2_opt = nn::make_optimizer(params.critic2, config.critic_lr, config.optimizer);
}

AgentStreams AgentStreams::derive(std::uint64_t seed) {
  return {traffic::RngStream(seed, "exploration"), traffic::RngStream(seed, "warmup"),
          traffic::RngStream(seed, "target_noise"), traffic::RngStream(seed, "replay")};
}

double td_target(double reward, double discount, bool done, double q1, double q2) {
  return td_target(reward, discount, done, std::min(q1, q2));
}

double td_target(double reward, double discount, bool done, double q1) {
  return done ? reward : reward + discount * q1;
}

double smoothed_action(double target_action, double noise, double clip, double min_action, double max_action) {
  return std::clamp(target_action + std::clamp(noise, -clip, clip), min_action, max_action);
}

double explored_action(double policy_action, double noise, double min_action, double max_action) {
  return std::clamp(policy_action + noise, min_action, max_action);
}

void deterministic_policy_step(nn::Mlp& actor, nn::AdamState& optimizer, const nn::Matrix& states,
                               double action_mid, double action_half, const ActionGradient& dq_da,
                               PolicyStepScratch& s) {
  actor.forward(states, s.trace);
  const nn::Matrix& y = s.trace.output();
  s.actions.resize(y.rows(), y.cols());
  for (std::size_t i = 0; i < y.size(); ++i) s.actions.data()[i] = action_mid + action_half * y.data()[i];
  s.action_grad.resize(y.rows(), y.cols());
  dq_da(s.actions, s.action_grad);
  // Ascent on mean Q == descent on -mean Q.
  const double scale = -action_half / static_cast<double>(states.rows());
  s.upstream.resize(y.rows(), y.cols());
  for (std::size_t i = 0; i < y.size(); ++i) s.upstream.data()[i] = scale * s.action_grad.data()[i];
  nn::backward(actor, s.trace, s.upstream, s.grads, s.backward, true);
  nn::adam_step(actor, s.grads.parameters, optimizer);
}

Td3Agent::Td3Agent(std::size_t state_dim, std::size_t action_dim, AgentConfig config, std::uint64_t seed)
    : Td3Agent(state_dim, action_dim, config, init_agent_params(state_dim, action_dim, config, seed),
               AgentStreams::derive(seed)) {}

Td3Agent::Td3Agent(std::size_t state_dim, std::size_t action_dim, AgentConfig config, AgentParams params,
                   AgentStreams streams, std::uint64_t update_count)
    : state_dim_(state_dim),
      action_dim_(action_dim),
      config_(std::move(config)),
      params_(std::move(params)),
      streams_(streams),
      update_count_(update_count) {
  validate(config_);
  if (params_.actor.input_size() != state_dim_ || params_.actor.output_size() != action_dim_ ||
      params_.critic1.input_size() != state_dim_ + action_dim_ || params_.critic1.output_size() != 1 ||
      !params_.critic2.same_architecture(params_.critic1) || !params_.actor_target.same_architecture(params_.actor) ||
      !params_.critic1_target.same_architecture(params_.critic1) ||
      !params_.critic2_target.same_architecture(params_.critic2)) {
    throw ContractError("agent networks do not match the state/action dimensions");
  }
}

std::vector<double> Td3Agent::select_action(std::span<const double> state, bool explore) {
  if (state.size() != state_dim_) throw ContractError("state has the wrong dimension");
  std::vector<double> a = params_.actor.forward(state);
  for (double& v : a) {
    v = action_mid() + action_half() * v;
    if (explore) {
      const double noise = streams_.exploration.normal(0.0, config_.exploration_noise * config_.max_action);
      v = explored_action(v, noise, config_.min_action, config_.max_action);
    } else {
      v = std::clamp(v, config_.min_action, config_.max_action);
    }
  }
  return a;
}

std::vector<double> Td3Agent::warmup_action(const env::Box& action_space) {
  return action_space.sample(streams_.warmup);
}

void Td3Agent::smooth_target_actions(const nn::Matrix& next_states, nn::Matrix& out) {
  params_.actor_target.forward(next_states, trace_a_);
  const nn::Matrix& y = trace_a_.output();
  out.resize(y.rows(), y.cols());
  const double sigma = config_.policy_noise * config_.max_action;
  const double clip = config_.noise_clip * config_.max_action;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = action_mid() + action_half() * y.data()[i];
    if (config_.target_smoothing()) {
      out.data()[i] =
          smoothed_action(a, streams_.target_noise.normal(0.0, sigma), clip, config_.min_action, config_.max_action);
    } else {
      out.data()[i] = std::clamp(a, config_.min_action, config_.max_action);
    }
  }
}

void Td3Agent::join_state_action(const nn::Matrix& states, const nn::Matrix& actions, nn::Matrix& out) const {
  out.resize(states.rows(), state_dim_ + action_dim_);
  for (std::size_t r = 0; r < states.rows(); ++r) {
    std::span<double> row = out.row(r);
    std::copy(states.row(r).begin(), states.row(r).end(), row.begin());
    std::copy(actions.row(r).begin(), actions.row(r).end(), row.begin() + static_cast<std::ptrdiff_t>(state_dim_));
  }
}

void Td3Agent::td_targets(const Batch& batch, std::vector<double>& out) {
  smooth_target_actions(batch.next_states, next_actions_);
  join_state_action(batch.next_states, next_actions_, joined_);
  params_.critic1_target.forward(joined_, trace_a_);
  const nn::Matrix& q1 = trace_a_.output();
  out.resize(batch.size());
  if (config_.twin_critics()) {
    params_.critic2_target.forward(joined_, trace_b_);
    const nn::Matrix& q2 = trace_b_.output();
    for (std::size_t b = 0; b < batch.size(); ++b) {
      out[b] = td_target(batch.rewards[b], config_.discount, batch.done[b] != 0.0, q1(b, 0), q2(b, 0));
    }
  } else {
    for (std::size_t b = 0; b < batch.size(); ++b) {
      out[b] = td_target(batch.rewards[b], config_.discount, batch.done[b] != 0.0, q1(b, 0));
    }
  }
}

double Td3Agent::critic_update(const Batch& batch, std::span<const double> targets) {
  if (targets.size() != batch.size()) throw ContractError("one TD target per batch row is required");
  join_state_action(batch.states, batch.actions, joined_);
  const double n = static_cast<double>(batch.size());

  auto step_critic = [&](nn::Mlp& critic, nn::AdamState& opt, const char* name) {
    critic.forward(joined_, trace_a_);
    const nn::Matrix& q = trace_a_.output();
    upstream_.resize(batch.size(), 1);
    double loss = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const double diff = q(b, 0) - targets[b];
      loss += diff * diff;
      upstream_(b, 0) = 2.0 * diff / n;
    }
    loss /= n;
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "non-finite " << name << " loss";
      for (std::size_t b = 0; b < batch.size(); ++b) {
        if (!std::isfinite(q(b, 0)) || !std::isfinite(targets[b])) {
          msg << " (first bad row " << b << ": replay index " << batch.indices.at(b) << ", q=" << q(b, 0)
              << ", target=" << targets[b] << ", reward=" << batch.rewards[b] << ")";
          break;
        }
      }
      throw TrainingError(msg.str());
    }
    nn::backward(critic, trace_a_, upstream_, grads_, scratch_, true);
    nn::adam_step(critic, grads_.parameters, opt);
    return loss;
  };

  double loss = step_critic(params_.critic1, params_.critic1_opt, "critic1");
  if (config_.twin_critics()) loss += step_critic(params_.critic2, params_.critic2_opt, "critic2");
  return loss;
}

void Td3Agent::actor_update(const Batch& batch) {
  const ActionGradient through_critic = [this, &batch](const nn::Matrix& actions, nn::Matrix& grad) {
    join_state_action(batch.states, actions, joined_);
    params_.critic1.forward(joined_, trace_b_);
    upstream_.resize(batch.size(), 1);
    std::fill(upstream_.values().begin(), upstream_.values().end(), 1.0);
    nn::backward(params_.critic1, trace_b_, upstream_, grads_, scratch_, false);
    for (std::size_t r = 0; r < actions.rows(); ++r) {
      for (std::size_t c = 0; c < action_dim_; ++c) grad(r, c) = grads_.input(r, state_dim_ + c);
    }
  };
  deterministic_policy_step(params_.actor, params_.actor_opt, batch.states, action_mid(), action_half(),
                            through_critic, policy_);

  nn::polyak_update(params_.critic1_target, params_.critic1, config_.tau);
  if (config_.twin_critics()) nn::polyak_update(params_.critic2_target, params_.critic2, config_.tau);
  nn::polyak_update(params_.actor_target, params_.actor, config_.tau);
}

UpdateStats Td3Agent::update(const ReplayBuffer& buffer) {
  UpdateStats stats;
  if (buffer.size() < config_.batch_size) return stats;
  buffer.sample(config_.batch_size, streams_.replay, batch_);
  td_targets(batch_, targets_);
  stats.critic_loss = critic_update(batch_, targets_);
  stats.trained = true;
  ++update_count_;
  if (update_count_ % static_cast<std::uint64_t>(config_.effective_policy_freq()) == 0) {
    actor_update(batch_);
    stats.actor_updated = true;
  }
  return stats;
}

}  // namespace nslice::rl
