// SPDX-License-Identifier: Apache-2.0

#include "nslice/env/admission.hpp"

namespace nslice::env {
namespace {

struct QueueView {
  std::vector<UeQueue> queues;
  double omega = 0.0;
};

QueueView queues_of(const std::vector<traffic::Ue>& ues) {
  QueueView view;
  view.queues.reserve(ues.size() + 1);
  for (const traffic::Ue& ue : ues) {
    view.queues.push_back({ue.rate, ue.lambda});
    view.omega += ue.lambda;
  }
  return view;
}

}  // namespace

double slice_latency(const std::vector<traffic::Ue>& ues, const AdmissionContext& ctx) {
  const QueueView view = queues_of(ues);
  return network_latency(ctx.vnf_count, view.omega, ctx.mu_star, view.queues, ctx.boot_latency, ctx.latency_cap);
}

AdmissionResult admit_ues(const std::vector<traffic::Ue>& candidates, std::vector<traffic::Ue>& active,
                          const AdmissionContext& ctx) {
  AdmissionResult result;
  QueueView view = queues_of(active);
  std::vector<double> sinrs;
  for (const traffic::Ue& ue : active) sinrs.push_back(ue.sinr);
  for (const traffic::Ue& candidate : candidates) {
    const double omega_before = view.omega;
    view.queues.push_back({candidate.rate, candidate.lambda});
    view.omega += candidate.lambda;
    const bool stable = queues_stable(ctx.vnf_count, view.omega, ctx.mu_star, view.queues);
    sinrs.push_back(candidate.sinr);
    const bool fits = computation_cost(sinrs, ctx.k0, ctx.theta) <= ctx.compute_capacity;
    const bool within_target =
        fits && stable && network_latency(ctx.vnf_count, view.omega, ctx.mu_star, view.queues, ctx.boot_latency,
                                  ctx.latency_cap) <= ctx.qos_latency;
    if (within_target) {
      active.push_back(candidate);
      result.admitted.push_back(candidate);
    } else {
      view.queues.pop_back();
      view.omega = omega_before;
      sinrs.pop_back();
      result.rejected.push_back(candidate);
    }
  }
  return result;
}

}  // namespace nslice::env
