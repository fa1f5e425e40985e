// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "nslice/env/admission.hpp"
#include "nslice/traffic/rng.hpp"

namespace {

using namespace nslice;
using namespace nslice::env;

traffic::Ue make_ue(std::uint64_t id, double rate, double lambda, double sinr = 3.0) {
  traffic::Ue ue;
  ue.ue_id = id;
  ue.rate = rate;
  ue.lambda = lambda;
  ue.sinr = sinr;
  ue.remaining_lifetime = 5;
  return ue;
}

// Direct evaluation of the latency formula for a population.
double oracle_latency(const std::vector<traffic::Ue>& ues, int j, double mu, double boot) {
  double omega = 0.0;
  for (const auto& ue : ues) omega += ue.lambda;
  if (j * mu <= omega) return std::numeric_limits<double>::infinity();
  double sum = j * boot;
  for (const auto& ue : ues) {
    if (ue.rate <= ue.lambda) return std::numeric_limits<double>::infinity();
    sum += j / (j * mu - omega) + 1.0 / (ue.rate - ue.lambda);
  }
  return sum;
}

TEST(Admission, EmptyCandidates) {
  std::vector<traffic::Ue> active;
  const AdmissionResult r = admit_ues({}, active, AdmissionContext{});
  EXPECT_TRUE(r.admitted.empty());
  EXPECT_TRUE(r.rejected.empty());
  EXPECT_TRUE(active.empty());
}

TEST(Admission, SingleCandidateUnconstrained) {
  AdmissionContext ctx;
  ctx.vnf_count = 16;
  ctx.mu_star = 1e9;
  ctx.qos_latency = 1e9;
  ctx.latency_cap = 1e12;
  std::vector<traffic::Ue> active;
  const AdmissionResult r = admit_ues({make_ue(1, 10.0, 1.0)}, active, ctx);
  ASSERT_EQ(r.admitted.size(), 1u);
  EXPECT_TRUE(r.rejected.empty());
  EXPECT_EQ(active.size(), 1u);
}

TEST(Admission, IdenticalCandidatesAdmitLongestFeasiblePrefix) {
  AdmissionContext ctx;
  ctx.vnf_count = 3;
  ctx.mu_star = 4.0;
  ctx.qos_latency = 20.0;
  ctx.latency_cap = 100.0;
  ctx.boot_latency = 0.5;
  std::vector<traffic::Ue> candidates;
  for (std::uint64_t i = 0; i < 30; ++i) candidates.push_back(make_ue(i, 6.0, 1.0));

  std::size_t k = 0;
  while (k < candidates.size()) {
    const std::vector<traffic::Ue> prefix(candidates.begin(), candidates.begin() + static_cast<long>(k + 1));
    if (oracle_latency(prefix, ctx.vnf_count, ctx.mu_star, ctx.boot_latency) > ctx.qos_latency) break;
    ++k;
  }
  ASSERT_GT(k, 0u);
  ASSERT_LT(k, candidates.size());

  std::vector<traffic::Ue> active;
  const AdmissionResult r = admit_ues(candidates, active, ctx);
  ASSERT_EQ(r.admitted.size(), k);
  EXPECT_EQ(r.rejected.size(), candidates.size() - k);
  for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(r.admitted[i].ue_id, i);
}

TEST(Admission, ComputeCapacityBoundsDemand) {
  AdmissionContext ctx;
  ctx.vnf_count = 16;
  ctx.mu_star = 100.0;
  ctx.qos_latency = 1e6;
  ctx.latency_cap = 1e9;
  ctx.theta = 1.0;
  ctx.k0 = 1.0;
  // Each UE with sinr 3 demands 1 + log2(4) = 3 MOPTS.
  ctx.compute_capacity = 10.0;
  std::vector<traffic::Ue> candidates;
  for (std::uint64_t i = 0; i < 5; ++i) candidates.push_back(make_ue(i, 50.0, 0.1, 3.0));
  std::vector<traffic::Ue> active;
  const AdmissionResult r = admit_ues(candidates, active, ctx);
  EXPECT_EQ(r.admitted.size(), 3u);
  EXPECT_LE(computation_cost(std::vector<double>(active.size(), 3.0), ctx.k0, ctx.theta), ctx.compute_capacity);
}

TEST(Admission, RandomPopulationsNeverExceedTargetOrCapacity) {
  traffic::RngStream rng(8, "admission");
  for (int trial = 0; trial < 300; ++trial) {
    AdmissionContext ctx;
    ctx.vnf_count = 1 + static_cast<int>(rng.index(6));
    ctx.mu_star = rng.uniform(1.0, 5.0);
    ctx.qos_latency = rng.uniform(5.0, 40.0);
    ctx.latency_cap = 100.0;
    ctx.theta = rng.uniform(0.0, 10.0);
    ctx.k0 = rng.uniform(0.0, 20.0);
    ctx.compute_capacity = rng.uniform(0.0, 300.0);
    std::vector<traffic::Ue> active, candidates;
    for (std::uint64_t i = 0; i < 12; ++i) {
      candidates.push_back(make_ue(i, rng.uniform(0.5, 8.0), rng.uniform(0.1, 1.5), rng.uniform(1.0, 15.0)));
    }
    const AdmissionResult r = admit_ues(candidates, active, ctx);
    EXPECT_EQ(r.admitted.size() + r.rejected.size(), candidates.size());
    EXPECT_EQ(active.size(), r.admitted.size());
    if (active.empty()) continue;
    std::vector<double> sinrs;
    for (const auto& ue : active) sinrs.push_back(ue.sinr);
    EXPECT_LE(computation_cost(sinrs, ctx.k0, ctx.theta), ctx.compute_capacity);
    EXPECT_LE(oracle_latency(active, ctx.vnf_count, ctx.mu_star, ctx.boot_latency), ctx.qos_latency);
  }
}

}  // namespace
