// SPDX-License-Identifier: Apache-2.0

#include "nslice/rl/trainer.hpp"

#include <algorithm>

#include "nslice/errors.hpp"
#include "nslice/traffic/rng.hpp"

namespace nslice::rl {

std::uint64_t episode_seed(std::uint64_t run_seed, std::uint64_t episode) {
  return traffic::mix64(traffic::mix64(run_seed) ^ (episode + 1));
}

namespace {

std::size_t buffer_capacity(const AgentConfig& config) {
  return static_cast<std::size_t>(std::min<std::uint64_t>(config.replay_capacity, config.max_timesteps));
}

std::size_t obs_size(const env::ScenarioConfig& s) { return env::SlicingEnv::kFieldsPerSlice * s.slices.size(); }

}  // namespace

Trainer::Trainer(env::ScenarioConfig scenario, AgentConfig config, std::uint64_t seed)
    : Trainer(scenario, Td3Agent(obs_size(scenario), scenario.slices.size(), config, seed), seed, 0, 0) {}

Trainer::Trainer(env::ScenarioConfig scenario, Td3Agent agent, std::uint64_t seed, std::uint64_t t,
                 std::uint64_t episode)
    : env_(std::move(scenario)),
      agent_(std::move(agent)),
      buffer_(std::max<std::size_t>(1, buffer_capacity(agent_.config())), env_.observation_size(),
              env_.action_size()),
      seed_(seed),
      t_(t),
      episode_(episode) {
  if (agent_.state_dim() != env_.observation_size() || agent_.action_dim() != env_.action_size()) {
    throw ContractError("agent dimensions do not match the scenario");
  }
  state_ = env_.reset(episode_seed(seed_, episode_));
}

StepMetrics Trainer::train_step() {
  StepMetrics m;
  m.t = t_;
  m.episode = episode_;
  m.warmup = t_ < agent_.config().start_timesteps;
  m.action = m.warmup ? agent_.warmup_action(env_.action_space()) : agent_.select_action(state_, true);

  env::StepResult r = env_.step(m.action);
  buffer_.push(state_, m.action, r.reward, r.observation, r.done);
  episode_return_ += r.reward;

  if (!m.warmup) m.update = agent_.update(buffer_);

  m.reward = r.reward;
  m.done = r.done;
  m.episode_return = episode_return_;
  m.info = std::move(r.info);
  ++t_;
  if (r.done) {
    ++episode_;
    episode_return_ = 0.0;
    state_ = env_.reset(episode_seed(seed_, episode_));
  } else {
    state_ = std::move(r.observation);
  }
  return m;
}

std::vector<StepMetrics> evaluate_policy(const env::ScenarioConfig& scenario, const nn::Mlp& actor,
                                         const AgentConfig& config, std::uint64_t seed, std::uint64_t episodes) {
  env::SlicingEnv env(scenario);
  if (actor.input_size() != env.observation_size() || actor.output_size() != env.action_size()) {
    throw ContractError("policy dimensions do not match the scenario");
  }
  const double mid = 0.5 * (config.max_action + config.min_action);
  const double half = 0.5 * (config.max_action - config.min_action);
  std::vector<StepMetrics> out;
  std::uint64_t t = 0;
  for (std::uint64_t ep = 0; ep < episodes; ++ep) {
    std::vector<double> state = env.reset(episode_seed(seed, ep));
    double ret = 0.0;
    bool done = false;
    while (!done) {
      StepMetrics m;
      m.t = t++;
      m.episode = ep;
      m.action = actor.forward(state);
      for (double& a : m.action) a = std::clamp(mid + half * a, config.min_action, config.max_action);
      env::StepResult r = env.step(m.action);
      ret += r.reward;
      m.reward = r.reward;
      m.done = done = r.done;
      m.episode_return = ret;
      m.info = std::move(r.info);
      state = std::move(r.observation);
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace nslice::rl
