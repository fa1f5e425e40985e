// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace nslice::env {

/// Traffic and QoS description of one slice.
struct SliceSpec {
  int slice_id = 0;
  double arrival_rate_mean = 1.0;   // packets per step per UE
  double ue_arrival_rate = 0.5;     // new UEs per step (Poisson mean)
  double ue_mean_lifetime = 40.0;   // steps
  double qos_latency = 20.0;        // ms
  double bandwidth = 2.0;           // packets per step per bit/s/Hz
  double tx_power = 0.2;            // W, stands in for the squared precoder norm
};

struct CostWeights {
  double computation = 0.01;
  double latency = 0.1;
  double energy = 1.0;
};

/// Every physical, queueing and cost parameter of a run.
///
/// Physical constants the literature leaves open (theta, k0, mu_star,
/// per-VNF energy, bandwidth, SINR range) carry plausible desk defaults,
/// not measured values.
struct ScenarioConfig {
  int num_cells = 10;
  int num_cpus = 4;
  double cpu_capacity = 1000.0;     // MOPTS per CPU
  int max_vnfs = 16;                // per slice
  double vnf_capacity = 125.0;      // MOPTS per VNF
  double theta = 10.0;              // MOPTS per log2 unit of SINR
  double k0 = 20.0;                 // MOPTS base load per UE
  double mu_star = 4.0;             // packets per step per VNF
  double boot_latency = 1.0;        // ms per newly booted VNF
  double vnf_energy = 2.0;          // J per active VNF per step
  double sigma_star = 1e-26;        // J per (operations per slot)^3
  double amp_efficiency = 0.5;
  std::vector<SliceSpec> slices;
  CostWeights weights;
  std::array<double, 3> cpu_split{0.5, 0.1, 0.4};  // coding, modulation, fft
  int episode_length = 200;
  double latency_cap = 100.0;       // ms
  double qos_penalty = 1.0;
  double saturation_penalty = 1.0;
  double reward_epsilon = 1e-6;
  double sinr_min = 1.0;            // linear
  double sinr_max = 15.0;
  double max_ues = 64.0;            // observation normalisation for X and m
  double energy_cap = 100.0;        // J, observation normalisation for E

  double total_capacity() const noexcept { return num_cpus * cpu_capacity; }
};

/// Two slices with 20 ms and 40 ms delay targets.
ScenarioConfig default_scenario();

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& config);

/// Strict load: unknown keys and type mismatches are ConfigErrors.
/// Missing keys keep their defaults; a missing "slices" array keeps the
/// default two-slice layout.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ScenarioConfig& config);

}  // namespace nslice::env
