// SPDX-License-Identifier: Apache-2.0

#include "nslice/env/slicing_env.hpp"

#include <algorithm>
#include <cmath>

#include "nslice/env/cost_model.hpp"
#include "nslice/errors.hpp"

namespace nslice::env {
namespace {

constexpr double kOpsPerMopts = 1e6;

double unit(double value, double bound) { return std::clamp(value / bound, 0.0, 1.0); }

}  // namespace

std::vector<double> Box::sample(traffic::RngStream& rng) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = rng.uniform(low[i], high[i]);
  return out;
}

bool Box::contains(std::span<const double> x, double tolerance) const {
  if (x.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(x[i] >= low[i] - tolerance && x[i] <= high[i] + tolerance)) return false;
  }
  return true;
}

std::vector<double> active_cpu_capabilities(double cpu_alloc_mopts, double cpu_capacity_mopts) {
  const double alloc = std::max(cpu_alloc_mopts, 0.0);
  const auto active = static_cast<std::size_t>(std::ceil(alloc / cpu_capacity_mopts));
  return std::vector<double>(active, cpu_capacity_mopts * kOpsPerMopts);
}

SlicingEnv::SlicingEnv(ScenarioConfig config) : config_(std::move(config)) {
  validate(config_);
  std::sort(config_.slices.begin(), config_.slices.end(),
            [](const SliceSpec& a, const SliceSpec& b) { return a.slice_id < b.slice_id; });
}

Box SlicingEnv::observation_space() const {
  return {std::vector<double>(observation_size(), 0.0), std::vector<double>(observation_size(), 1.0)};
}

Box SlicingEnv::action_space() const {
  return {std::vector<double>(action_size(), -1.0), std::vector<double>(action_size(), 1.0)};
}

std::vector<double> SlicingEnv::reset(std::uint64_t seed) {
  state_ = EnvState{};
  state_.streams = traffic::TrafficStreams::derive(seed);
  const double initial_alloc =
      std::min(config_.vnf_capacity, config_.total_capacity() / static_cast<double>(num_slices()));
  for (const SliceSpec& spec : config_.slices) {
    SliceState s;
    s.slice_id = spec.slice_id;
    s.cpu_alloc = initial_alloc;
    s.vnf_count = 1;
    state_.slices.push_back(std::move(s));
  }
  ready_ = true;
  return observation();
}

std::vector<double> SlicingEnv::observation() const {
  std::vector<double> obs;
  obs.reserve(observation_size());
  for (const SliceState& s : state_.slices) {
    obs.push_back(unit(s.new_ues, config_.max_ues));
    obs.push_back(unit(s.cpu_alloc, config_.total_capacity()));
    obs.push_back(unit(s.latency, config_.latency_cap));
    obs.push_back(unit(s.energy, config_.energy_cap));
    obs.push_back(unit(static_cast<double>(s.active.size()), config_.max_ues));
    obs.push_back(unit(s.vnf_count, config_.max_vnfs));
  }
  return obs;
}

void SlicingEnv::apply_scaling(std::span<const double> action) {
  const double total = config_.total_capacity();
  for (std::size_t i = 0; i < state_.slices.size(); ++i) {
    double others = 0.0;
    for (std::size_t k = 0; k < state_.slices.size(); ++k) {
      if (k != i) others += state_.slices[k].cpu_alloc;
    }
    SliceState& s = state_.slices[i];
    const double headroom = std::max(total - others, 0.0);
    const double free = std::max(headroom - s.cpu_alloc, 0.0);
    const double delta = clip_scaling_action(action[i], s.cpu_alloc, free);
    s.cpu_alloc = std::clamp(s.cpu_alloc + delta, 0.0, headroom);
  }
}

StepResult SlicingEnv::step(std::span<const double> action) {
  if (!ready_) throw ContractError("step() called before reset()");
  if (state_.done) throw ContractError("step() called after the episode finished; call reset()");
  if (action.size() != action_size()) throw ContractError("action has the wrong dimension");
  for (const double a : action) {
    if (!std::isfinite(a)) throw ContractError("action contains a non-finite component");
  }

  apply_scaling(action);

  StepResult result;
  StepInfo& info = result.info;
  const RewardShaping shaping{config_.qos_penalty, config_.saturation_penalty, config_.reward_epsilon};
  const traffic::SinrRange sinr{config_.sinr_min, config_.sinr_max};

  for (std::size_t i = 0; i < state_.slices.size(); ++i) {
    SliceState& s = state_.slices[i];
    const SliceSpec& spec = config_.slices[i];
    SliceStepInfo si;
    si.slice_id = s.slice_id;

    const VnfUpdate vnf = update_vnf_count(s.cpu_alloc, config_.vnf_capacity, s.vnf_count, config_.max_vnfs);
    s.vnf_count = vnf.count;
    si.newly_booted = vnf.newly_booted;

    traffic::LifetimeAdvance aged = traffic::advance_lifetimes(std::move(s.active));
    s.active = std::move(aged.surviving);
    si.departed = static_cast<int>(aged.departed.size());
    const std::vector<traffic::Ue> candidates = traffic::spawn_ues(spec, sinr, state_.streams, state_.next_ue_id);
    si.arrived = static_cast<int>(candidates.size());
    s.new_ues = si.arrived;

    // Booting charges newly_booted * L_d in total; spread over the j active VNFs.
    AdmissionContext ctx;
    ctx.vnf_count = s.vnf_count;
    ctx.mu_star = config_.mu_star;
    ctx.boot_latency = config_.boot_latency * vnf.newly_booted / static_cast<double>(s.vnf_count);
    ctx.qos_latency = spec.qos_latency;
    ctx.latency_cap = config_.latency_cap;
    ctx.compute_capacity = s.cpu_alloc;
    ctx.theta = config_.theta;
    ctx.k0 = config_.k0;
    const AdmissionResult admission = admit_ues(candidates, s.active, ctx);
    si.admitted = static_cast<int>(admission.admitted.size());
    si.rejected = static_cast<int>(admission.rejected.size());
    si.active_ues = static_cast<int>(s.active.size());

    std::vector<double> sinrs;
    std::vector<double> tx_powers;
    std::vector<UeQueue> queues;
    double omega = 0.0;
    for (const traffic::Ue& ue : s.active) {
      sinrs.push_back(ue.sinr);
      tx_powers.push_back(ue.tx_power);
      queues.push_back({ue.rate, ue.lambda});
      omega += ue.lambda;
    }
    si.computation = computation_cost(sinrs, config_.k0, config_.theta);
    // Demand above the allocation stalls processing just like an unstable queue.
    const bool overloaded = si.computation > s.cpu_alloc;
    si.saturated = overloaded || !queues_stable(s.vnf_count, omega, config_.mu_star, queues);
    const double raw_latency =
        network_latency(s.vnf_count, omega, config_.mu_star, queues, ctx.boot_latency, config_.latency_cap);
    si.latency = overloaded ? config_.latency_cap : std::min(raw_latency, config_.latency_cap);
    si.qos_violated = si.latency > spec.qos_latency;
    si.energy = network_energy(active_cpu_capabilities(s.cpu_alloc, config_.cpu_capacity), s.vnf_count, tx_powers,
                               config_.sigma_star, config_.amp_efficiency, config_.vnf_energy);
    si.cpu_alloc = s.cpu_alloc;
    si.cpu_used = std::min(si.computation, s.cpu_alloc);
    si.cpu_utilization = s.cpu_alloc > 0.0 ? si.cpu_used / s.cpu_alloc : 0.0;
    for (std::size_t f = 0; f < 3; ++f) si.cpu_used_by_function[f] = si.cpu_used * config_.cpu_split[f];
    si.vnf_count = s.vnf_count;

    s.latency = si.latency;
    s.energy = si.energy;

    info.computation += si.computation;
    info.latency += si.latency;
    info.energy += si.energy;
    info.active_ues += si.active_ues;
    info.violated_slices += si.qos_violated ? 1 : 0;
    info.saturated = info.saturated || si.saturated;
    info.slices.push_back(si);
  }

  info.cost = total_network_cost(info.computation, info.latency, info.energy, config_.weights, info.active_ues);
  result.reward = reward_from_cost(info.cost, info.violated_slices, info.saturated, shaping);

  ++state_.step;
  state_.done = state_.step >= config_.episode_length;
  result.done = state_.done;
  result.observation = observation();
  return result;
}

}  // namespace nslice::env
