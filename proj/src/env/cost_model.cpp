// SPDX-License-Identifier: Apache-2.0

#include "nslice/env/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "nslice/errors.hpp"

namespace nslice::env {

double computation_cost(std::span<const double> sinrs, double k0, double theta) {
  double total = 0.0;
  for (const double sinr : sinrs) {
    if (!(sinr >= 0.0)) throw DomainError("SINR must be non-negative");
    total += theta * std::log2(1.0 + sinr);
  }
  return total + static_cast<double>(sinrs.size()) * k0;
}

bool queues_stable(int vnf_count, double omega, double mu_star, std::span<const UeQueue> ues) {
  const bool idle = ues.empty() && omega <= 0.0;
  if (!idle && !(vnf_count * mu_star > omega)) return false;
  return std::all_of(ues.begin(), ues.end(), [](const UeQueue& q) { return q.rate > q.lambda; });
}

double network_latency(int vnf_count, double omega, double mu_star, std::span<const UeQueue> ues,
                       double boot_latency, double latency_cap) {
  if (vnf_count < 0) throw DomainError("VNF count must be non-negative");
  if (vnf_count == 0 && omega > 0.0) throw DomainError("no active VNF to serve a positive arrival rate");
  if (!queues_stable(vnf_count, omega, mu_star, ues)) return latency_cap;
  const double j = static_cast<double>(vnf_count);
  const double processing = j / (j * mu_star - omega);
  double total = j * boot_latency;
  for (const UeQueue& q : ues) total += processing + 1.0 / (q.rate - q.lambda);
  return total;
}

double network_energy(std::span<const double> cpu_loads, int vnf_count, std::span<const double> tx_powers,
                      double sigma_star, double rho, double psi) {
  if (!(rho > 0.0)) throw DomainError("amplifier efficiency must be positive");
  double processors = 0.0;
  for (const double p : cpu_loads) processors += sigma_star * p * p * p;
  double transmission = 0.0;
  for (const double p : tx_powers) transmission += p / rho;
  return processors + static_cast<double>(vnf_count) * psi + transmission;
}

double total_network_cost(double computation, double latency, double energy, const CostWeights& weights,
                          int active_ues) {
  const double weighted =
      weights.computation * computation + weights.latency * latency + weights.energy * energy;
  return weighted / static_cast<double>(std::max(active_ues, 1));
}

double reward_from_cost(double n_t, std::size_t violated_slices, bool saturated, const RewardShaping& shaping) {
  double reward = 1.0 / (n_t + shaping.epsilon);
  reward -= shaping.qos_penalty * static_cast<double>(violated_slices);
  if (saturated) reward -= shaping.saturation_penalty;
  return reward;
}

double clip_scaling_action(double raw, double current_alloc, double free_capacity) {
  const double r = std::clamp(raw, -1.0, 1.0);
  return -current_alloc + (r + 1.0) / 2.0 * (current_alloc + free_capacity);
}

double neutral_scaling_action(double current_alloc, double free_capacity) {
  const double span = current_alloc + free_capacity;
  if (span <= 0.0) return 0.0;
  return 2.0 * current_alloc / span - 1.0;
}

VnfUpdate update_vnf_count(double cpu_alloc, double vnf_capacity, int prev_count, int max_vnfs) {
  if (!(vnf_capacity > 0.0)) throw DomainError("VNF capacity must be positive");
  const double needed = std::ceil(std::max(cpu_alloc, 0.0) / vnf_capacity);
  const int count = static_cast<int>(std::clamp(needed, 1.0, static_cast<double>(max_vnfs)));
  return {count, std::max(0, count - prev_count)};
}

}  // namespace nslice::env
