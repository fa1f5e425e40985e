// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nslice/nn/mlp.hpp"

namespace nslice::nn {

enum class OptimizerKind { adam, sgd };

std::string_view to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(std::string_view name);

/// Optimiser state for one network. With kind == sgd the moment buffers
/// stay zero and only `step` advances.
struct AdamState {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

AdamState make_optimizer(const Mlp& net, double learning_rate, OptimizerKind kind = OptimizerKind::adam);

/// One descent step: bias-corrected Adam, or plain SGD for kind == sgd.
/// Throws ContractError on shape mismatch and TrainingError (naming the
/// layer and block) when a gradient is not finite; parameters are left
/// untouched in both cases.
void adam_step(Mlp& net, std::span<const double> grads, AdamState& state);

/// target <- tau * online + (1 - tau) * target. tau = 0 and tau = 1 are
/// exact no-op and exact copy. Throws ContractError on architecture mismatch.
void polyak_update(Mlp& target, const Mlp& online, double tau);

}  // namespace nslice::nn
