// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nslice/rl/replay_buffer.hpp"
#include "nslice/rl/td3_agent.hpp"

namespace nslice::testing {

struct QuadraticActorResult {
  std::size_t updates = 0;       // updates until every probe output was within tolerance
  bool converged = false;
  double worst_error = 0.0;      // max |pi(s) - optimum| over probe states at the end
};

/// Linear actor pi(s) = w s + b trained through the deterministic policy
/// step against Q(s, a) = -(a - optimum)^2, whose maximiser is `optimum`
/// for every state.
inline QuadraticActorResult run_quadratic_actor(double optimum, double tolerance, std::size_t max_updates,
                                                std::uint64_t seed = 1) {
  traffic::RngStream rng(seed, "quadratic-fixture");
  nn::Mlp actor({1, 1}, {nn::Activation::identity});
  actor.weights(0)[0] = rng.uniform(-1.0, 1.0);
  actor.bias(0)[0] = rng.uniform(-1.0, 1.0);
  nn::AdamState opt = nn::make_optimizer(actor, 5e-3);
  const rl::ActionGradient dq_da = [optimum](const nn::Matrix& a, nn::Matrix& g) {
    g.resize(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) g.data()[i] = -2.0 * (a.data()[i] - optimum);
  };
  nn::Matrix states(32, 1);
  rl::PolicyStepScratch scratch;
  auto worst = [&] {
    double w = 0.0;
    for (double s = -1.0; s <= 1.0 + 1e-12; s += 0.1) {
      w = std::max(w, std::abs(actor.forward(std::vector<double>{s})[0] - optimum));
    }
    return w;
  };
  QuadraticActorResult result;
  for (std::size_t u = 1; u <= max_updates; ++u) {
    for (double& s : states.values()) s = rng.uniform(-1.0, 1.0);
    rl::deterministic_policy_step(actor, opt, states, 0.0, 1.0, dq_da, scratch);
    if (!result.converged && worst() <= tolerance) {
      result.converged = true;
      result.updates = u;
    }
  }
  result.worst_error = worst();
  return result;
}

/// A buffer filled with random transitions of the given shape.
inline rl::ReplayBuffer random_buffer(std::size_t n, std::size_t state_dim, std::size_t action_dim,
                                      std::uint64_t seed) {
  traffic::RngStream rng(seed, "random-buffer");
  rl::ReplayBuffer buffer(n, state_dim, action_dim);
  std::vector<double> s(state_dim), a(action_dim), s2(state_dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : s) v = rng.uniform();
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    for (double& v : s2) v = rng.uniform();
    buffer.push(s, a, rng.uniform(-1.0, 1.0), s2, rng.uniform() < 0.05);
  }
  return buffer;
}

}  // namespace nslice::testing
