// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nslice/env/admission.hpp"
#include "nslice/env/scenario.hpp"
#include "nslice/traffic/rng.hpp"
#include "nslice/traffic/traffic_model.hpp"

namespace nslice::env {

/// Axis-aligned continuous space.
struct Box {
  std::vector<double> low;
  std::vector<double> high;

  std::size_t size() const noexcept { return low.size(); }
  std::vector<double> sample(traffic::RngStream& rng) const;
  bool contains(std::span<const double> x, double tolerance = 1e-9) const;
};

struct SliceState {
  int slice_id = 0;
  std::vector<traffic::Ue> active;
  double cpu_alloc = 0.0;  // MOPTS
  int vnf_count = 1;
  int new_ues = 0;         // arrivals during the last step
  double latency = 0.0;    // ms, within [0, latency_cap]
  double energy = 0.0;     // J
};

struct EnvState {
  std::vector<SliceState> slices;  // ascending slice id
  int step = 0;
  bool done = false;
  std::uint64_t next_ue_id = 0;
  traffic::TrafficStreams streams;
};

/// Per-slice diagnostics of one step.
struct SliceStepInfo {
  int slice_id = 0;
  int arrived = 0;
  int admitted = 0;
  int rejected = 0;
  int departed = 0;
  int active_ues = 0;
  double computation = 0.0;  // MOPTS demanded by the active UEs
  double latency = 0.0;      // ms, clamped to latency_cap
  bool qos_violated = false;
  bool saturated = false;
  double energy = 0.0;
  double cpu_alloc = 0.0;
  double cpu_used = 0.0;
  double cpu_utilization = 0.0;
  std::array<double, 3> cpu_used_by_function{};  // coding, modulation, fft
  int vnf_count = 0;
  int newly_booted = 0;
};

struct StepInfo {
  std::vector<SliceStepInfo> slices;
  double computation = 0.0;
  double latency = 0.0;
  double energy = 0.0;
  double cost = 0.0;  // weighted cost per UE
  int active_ues = 0;
  std::size_t violated_slices = 0;
  bool saturated = false;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// Discrete-time C-RAN slicing environment with a reset/step interface.
///
/// Observation layout, per slice in ascending id order:
///   new UEs / max_ues, cpu_alloc / total capacity, latency / latency_cap,
///   energy / energy_cap, active UEs / max_ues, VNF count / max_vnfs,
/// each clamped to [0, 1]. The action holds one vertical-scaling component
/// per slice in [-1, 1].
class SlicingEnv {
 public:
  static constexpr std::size_t kFieldsPerSlice = 6;

  /// Validates the scenario; throws ConfigError.
  explicit SlicingEnv(ScenarioConfig config);

  std::vector<double> reset(std::uint64_t seed);

  /// Throws ContractError before the first reset, after `done`, or for a
  /// malformed action.
  StepResult step(std::span<const double> action);

  std::size_t num_slices() const noexcept { return config_.slices.size(); }
  std::size_t observation_size() const noexcept { return kFieldsPerSlice * num_slices(); }
  std::size_t action_size() const noexcept { return num_slices(); }
  Box observation_space() const;
  Box action_space() const;

  const ScenarioConfig& config() const noexcept { return config_; }
  const EnvState& state() const noexcept { return state_; }
  std::vector<double> observation() const;

 private:
  void apply_scaling(std::span<const double> action);

  ScenarioConfig config_;
  EnvState state_;
  bool ready_ = false;
};

/// Capabilities, in operations per slot, of the CPUs a slice's allocation
/// keeps active: every CPU hosting any share of the allocation runs at its
/// full capability.
std::vector<double> active_cpu_capabilities(double cpu_alloc_mopts, double cpu_capacity_mopts);

}  // namespace nslice::env
