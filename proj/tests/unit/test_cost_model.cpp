// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nslice/env/cost_model.hpp"
#include "nslice/errors.hpp"
#include "nslice/traffic/rng.hpp"

namespace {

using namespace nslice;
using namespace nslice::env;

TEST(ComputationCost, EmptyIsZero) { EXPECT_EQ(computation_cost({}, 0.5, 7.0), 0.0); }

TEST(ComputationCost, ZeroSinrLeavesOnlyBaseLoad) {
  const std::vector<double> d{0.0, 0.0};
  EXPECT_DOUBLE_EQ(computation_cost(d, 0.5, 7.0), 1.0);
}

TEST(ComputationCost, HandEvaluation) {
  const std::vector<double> d{3.0, 3.0};
  EXPECT_DOUBLE_EQ(computation_cost(d, 0.5, 1.0), 5.0);
}

TEST(ComputationCost, NegativeOrNanSinrIsDomainError) {
  const std::vector<double> neg{1.0, -0.1};
  const std::vector<double> nan{NAN};
  EXPECT_THROW(computation_cost(neg, 0.5, 1.0), DomainError);
  EXPECT_THROW(computation_cost(nan, 0.5, 1.0), DomainError);
}

TEST(ComputationCost, AdditiveOverConcatenation) {
  traffic::RngStream rng(1, "additivity");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(rng.index(6)), b(rng.index(6));
    for (double& x : a) x = rng.uniform(0.0, 20.0);
    for (double& x : b) x = rng.uniform(0.0, 20.0);
    std::vector<double> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const double k0 = rng.uniform(0.0, 5.0), theta = rng.uniform(0.0, 5.0);
    const double whole = computation_cost(ab, k0, theta);
    EXPECT_NEAR(whole, computation_cost(a, k0, theta) + computation_cost(b, k0, theta), 1e-12 * (1.0 + whole));
  }
}

TEST(Latency, BootTermOnlyWithoutUes) { EXPECT_DOUBLE_EQ(network_latency(1, 0.0, 2.0, {}, 5.0, 100.0), 5.0); }

TEST(Latency, HandEvaluation) {
  const std::vector<UeQueue> q{{2.0, 1.0}};
  EXPECT_DOUBLE_EQ(network_latency(1, 1.0, 2.0, q, 0.0, 100.0), 2.0);
}

TEST(Latency, UnstableProcessingQueueGivesCap) {
  const std::vector<UeQueue> q{{5.0, 2.0}};
  EXPECT_EQ(network_latency(1, 2.0, 1.0, q, 0.0, 100.0), 100.0);
  EXPECT_FALSE(queues_stable(1, 2.0, 1.0, q));
}

TEST(Latency, BoundaryProcessingQueueIsUnstable) {
  const std::vector<UeQueue> q{{5.0, 2.0}};
  EXPECT_EQ(network_latency(1, 2.0, 2.0, q, 0.0, 100.0), 100.0);
}

TEST(Latency, UnstableTransmissionQueueGivesCap) {
  const std::vector<UeQueue> q{{1.0, 1.0}};
  EXPECT_EQ(network_latency(4, 1.0, 2.0, q, 0.0, 77.0), 77.0);
}

TEST(Latency, ZeroVnfsWithLoadIsDomainError) {
  const std::vector<UeQueue> q{{2.0, 1.0}};
  EXPECT_THROW(network_latency(0, 1.0, 2.0, q, 0.0, 100.0), DomainError);
  EXPECT_THROW(network_latency(-1, 0.0, 2.0, {}, 0.0, 100.0), DomainError);
}

TEST(Latency, MonotoneInOmegaAndMuStar) {
  traffic::RngStream rng(2, "monotone");
  for (int trial = 0; trial < 500; ++trial) {
    const int j = 1 + static_cast<int>(rng.index(8));
    const double mu = rng.uniform(1.0, 5.0);
    const std::vector<UeQueue> q{{rng.uniform(3.0, 8.0), rng.uniform(0.1, 2.0)}};
    const double omega = rng.uniform(0.0, 0.8 * j * mu);
    const double base = network_latency(j, omega, mu, q, 1.0, 1e9);
    const double more_load = network_latency(j, omega * 1.05 + 1e-3, mu, q, 1.0, 1e9);
    const double faster = network_latency(j, omega, mu * 1.05, q, 1.0, 1e9);
    EXPECT_GT(more_load, base);
    EXPECT_LT(faster, base);
  }
}

TEST(Energy, FullCpuAtPublishedConstants) {
  const std::vector<double> p{1e9};
  EXPECT_NEAR(network_energy(p, 0, {}, 1e-26, 0.5, 2.0), 10.0, 1e-12);
}

TEST(Energy, EmptySystemIsZero) { EXPECT_EQ(network_energy({}, 0, {}, 1e-26, 0.5, 2.0), 0.0); }

TEST(Energy, HandEvaluation) {
  const std::vector<double> tx{1.0};
  EXPECT_DOUBLE_EQ(network_energy({}, 2, tx, 1e-26, 0.5, 3.0), 8.0);
}

TEST(Energy, NonPositiveEfficiencyIsDomainError) {
  EXPECT_THROW(network_energy({}, 0, {}, 1e-26, 0.0, 1.0), DomainError);
  EXPECT_THROW(network_energy({}, 0, {}, 1e-26, -1.0, 1.0), DomainError);
}

TEST(TotalCost, ZeroCosts) { EXPECT_EQ(total_network_cost(0, 0, 0, {1, 1, 1}, 3), 0.0); }

TEST(TotalCost, HandEvaluation) { EXPECT_DOUBLE_EQ(total_network_cost(2, 4, 6, {1, 1, 1}, 2), 6.0); }

TEST(TotalCost, EmptyNetworkDividesByOne) {
  EXPECT_DOUBLE_EQ(total_network_cost(2, 4, 6, {1, 1, 1}, 0), 12.0);
  EXPECT_DOUBLE_EQ(total_network_cost(2, 4, 6, {0.5, 2, 0.1}, 0), 1.0 + 8.0 + 0.6);
}

TEST(Reward, ReciprocalOfCost) { EXPECT_NEAR(reward_from_cost(4.0, 0, false, {}), 0.25, 1e-6); }

TEST(Reward, OneViolatedSlice) { EXPECT_NEAR(reward_from_cost(4.0, 1, false, {}), -0.75, 1e-6); }

TEST(Reward, ZeroCostHitsEpsilonGuard) { EXPECT_DOUBLE_EQ(reward_from_cost(0.0, 0, false, {}), 1e6); }

TEST(Reward, SignAndPenaltySteps) {
  traffic::RngStream rng(3, "reward");
  for (int trial = 0; trial < 500; ++trial) {
    const RewardShaping shaping{rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0), 1e-6};
    const double n_t = rng.uniform(1e-3, 100.0);
    const double clean = reward_from_cost(n_t, 0, false, shaping);
    EXPECT_GT(clean, 0.0);
    for (std::size_t v = 1; v <= 3; ++v) {
      EXPECT_NEAR(clean - reward_from_cost(n_t, v, false, shaping), shaping.qos_penalty * v, 1e-12 * (1 + clean));
    }
    EXPECT_NEAR(clean - reward_from_cost(n_t, 0, true, shaping), shaping.saturation_penalty, 1e-12 * (1 + clean));
  }
}

TEST(ScalingAction, Endpoints) {
  EXPECT_DOUBLE_EQ(clip_scaling_action(-1.0, 3.0, 7.0), -3.0);
  EXPECT_DOUBLE_EQ(clip_scaling_action(1.0, 3.0, 7.0), 7.0);
}

TEST(ScalingAction, Midpoint) { EXPECT_DOUBLE_EQ(clip_scaling_action(0.0, 3.0, 7.0), 2.0); }

TEST(ScalingAction, OutOfRangeRawIsClamped) {
  EXPECT_DOUBLE_EQ(clip_scaling_action(-4.0, 3.0, 7.0), -3.0);
  EXPECT_DOUBLE_EQ(clip_scaling_action(2.5, 3.0, 7.0), 7.0);
}

TEST(ScalingAction, NeutralActionIsNoChange) {
  traffic::RngStream rng(4, "neutral");
  for (int trial = 0; trial < 200; ++trial) {
    const double alloc = rng.uniform(0.0, 100.0), free = rng.uniform(0.0, 100.0);
    if (alloc + free == 0.0) continue;
    const double raw = neutral_scaling_action(alloc, free);
    EXPECT_GE(raw, -1.0);
    EXPECT_LE(raw, 1.0);
    EXPECT_NEAR(clip_scaling_action(raw, alloc, free), 0.0, 1e-9 * (alloc + free));
  }
}

TEST(VnfCount, ZeroAllocationKeepsOneStandby) {
  const VnfUpdate u = update_vnf_count(0.0, 10.0, 1, 8);
  EXPECT_EQ(u.count, 1);
  EXPECT_EQ(u.newly_booted, 0);
}

TEST(VnfCount, CeilingArithmetic) {
  const VnfUpdate u = update_vnf_count(25.0, 10.0, 2, 8);
  EXPECT_EQ(u.count, 3);
  EXPECT_EQ(u.newly_booted, 1);
}

TEST(VnfCount, CappedAtMaximum) { EXPECT_EQ(update_vnf_count(1000.0, 10.0, 1, 8).count, 8); }

TEST(VnfCount, ScaleDownBootsNothing) {
  const VnfUpdate u = update_vnf_count(15.0, 10.0, 6, 8);
  EXPECT_EQ(u.count, 2);
  EXPECT_EQ(u.newly_booted, 0);
}

}  // namespace
