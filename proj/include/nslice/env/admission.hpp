// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <vector>

#include "nslice/env/cost_model.hpp"
#include "nslice/traffic/traffic_model.hpp"

namespace nslice::env {

/// Queueing parameters of one slice for the current step.
struct AdmissionContext {
  int vnf_count = 1;
  double mu_star = 1.0;
  double boot_latency = 0.0;  // per-VNF boot latency charged this step
  double qos_latency = 20.0;
  double latency_cap = 100.0;
  double compute_capacity = std::numeric_limits<double>::infinity();  // MOPTS allocated to the slice
  double theta = 0.0;
  double k0 = 0.0;
};

struct AdmissionResult {
  std::vector<traffic::Ue> admitted;
  std::vector<traffic::Ue> rejected;
};

/// Slice latency for a UE population under `ctx`, saturating at latency_cap.
double slice_latency(const std::vector<traffic::Ue>& ues, const AdmissionContext& ctx);

/// Greedy predicted-QoS admission, in candidate order. A candidate joins
/// `active` iff, with it added, every queue stays stable, the predicted
/// slice latency is at most the delay target, and the slice's computation
/// demand still fits its CPU allocation.
AdmissionResult admit_ues(const std::vector<traffic::Ue>& candidates, std::vector<traffic::Ue>& active,
                          const AdmissionContext& ctx);

}  // namespace nslice::env
