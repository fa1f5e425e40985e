// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "nslice/env/scenario.hpp"

namespace nslice::env {

/// Baseband compute demand in MOPTS: sum over UEs of theta * log2(1 + sinr),
/// plus k0 per UE. Throws DomainError for a negative or NaN SINR.
double computation_cost(std::span<const double> sinrs, double k0, double theta);

/// Service and arrival rate of one UE's wireless transmission queue.
struct UeQueue {
  double rate = 0.0;
  double lambda = 0.0;
};

/// True when the shared processing queue (vnf_count * mu_star > omega) and
/// every transmission queue (rate > lambda) are stable.
bool queues_stable(int vnf_count, double omega, double mu_star, std::span<const UeQueue> ues);

/// Mean network latency in ms:
///   vnf_count * boot_latency + sum_m [ j / (j mu* - omega) + 1 / (r_m - lambda_m) ].
/// Returns exactly `latency_cap` when any queue is unstable. The stable
/// value is returned as computed, without clamping.
/// Throws DomainError when vnf_count is 0 with positive omega, or negative.
double network_latency(int vnf_count, double omega, double mu_star, std::span<const UeQueue> ues,
                       double boot_latency, double latency_cap);

/// Energy per step: sum_i sigma* P_i^3 + j psi + sum_m p_m / rho.
/// Throws DomainError unless rho > 0.
double network_energy(std::span<const double> cpu_loads, int vnf_count, std::span<const double> tx_powers,
                      double sigma_star, double rho, double psi);

/// Weighted cost per served UE; the divisor is max(active_ues, 1).
double total_network_cost(double computation, double latency, double energy, const CostWeights& weights,
                          int active_ues);

struct RewardShaping {
  double qos_penalty = 1.0;
  double saturation_penalty = 1.0;
  double epsilon = 1e-6;
};

/// 1 / (n_t + epsilon), minus qos_penalty per violated slice and one
/// saturation_penalty when any queue saturated. May be negative.
double reward_from_cost(double n_t, std::size_t violated_slices, bool saturated, const RewardShaping& shaping);

/// Affine map of raw in [-1, 1] (clamped first) onto [-current_alloc, free_capacity].
double clip_scaling_action(double raw, double current_alloc, double free_capacity);

/// The raw action that maps to a zero change under clip_scaling_action.
double neutral_scaling_action(double current_alloc, double free_capacity);

struct VnfUpdate {
  int count = 1;
  int newly_booted = 0;
};

/// count = clamp(ceil(cpu_alloc / vnf_capacity), 1, max_vnfs);
/// newly_booted = max(0, count - prev_count).
VnfUpdate update_vnf_count(double cpu_alloc, double vnf_capacity, int prev_count, int max_vnfs);

}  // namespace nslice::env
