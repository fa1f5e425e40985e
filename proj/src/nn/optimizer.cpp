// SPDX-License-Identifier: Apache-2.0

#include "nslice/nn/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nslice/errors.hpp"
#include "nslice/simd/kernels.hpp"

namespace nslice::nn {
namespace {

std::string describe_parameter(const Mlp& net, std::size_t index) {
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const LayerLayout& layer = net.layers()[l];
    if (index < layer.bias_offset) return "layer " + std::to_string(l) + " weights";
    if (index < layer.bias_offset + layer.outputs) return "layer " + std::to_string(l) + " bias";
  }
  return "parameter " + std::to_string(index);
}

}  // namespace

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::adam ? "adam" : "sgd"; }

OptimizerKind optimizer_from_string(std::string_view name) {
  if (name == "adam") return OptimizerKind::adam;
  if (name == "sgd") return OptimizerKind::sgd;
  throw ContractError("unknown optimizer '" + std::string(name) + "'");
}

AdamState make_optimizer(const Mlp& net, double learning_rate, OptimizerKind kind) {
  AdamState state;
  state.kind = kind;
  state.learning_rate = learning_rate;
  state.first_moment.assign(net.parameter_count(), 0.0);
  state.second_moment.assign(net.parameter_count(), 0.0);
  return state;
}

void adam_step(Mlp& net, std::span<const double> grads, AdamState& state) {
  const std::size_t n = net.parameter_count();
  if (grads.size() != n || state.first_moment.size() != n || state.second_moment.size() != n) {
    throw ContractError("gradient or optimizer state does not match the network");
  }
  const auto bad = std::find_if(grads.begin(), grads.end(), [](double g) { return !std::isfinite(g); });
  if (bad != grads.end()) {
    throw TrainingError("non-finite gradient in " +
                        describe_parameter(net, static_cast<std::size_t>(bad - grads.begin())));
  }
  ++state.step;
  std::span<double> params = net.parameters();
  if (state.kind == OptimizerKind::sgd) {
    for (std::size_t i = 0; i < n; ++i) params[i] -= state.learning_rate * grads[i];
    return;
  }
  const double t = static_cast<double>(state.step);
  const simd::AdamCoefficients coeffs{state.learning_rate,
                                      state.beta1,
                                      state.beta2,
                                      state.epsilon,
                                      1.0 - std::pow(state.beta1, t),
                                      1.0 - std::pow(state.beta2, t)};
  simd::active_kernels().adam_update(params.data(), state.first_moment.data(), state.second_moment.data(),
                                     grads.data(), n, coeffs);
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  if (!target.same_architecture(online)) throw ContractError("polyak update between different architectures");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ContractError("tau must lie in [0, 1]");
  if (tau == 0.0) return;
  std::span<double> dst = target.parameters();
  const std::span<const double> src = online.parameters();
  if (tau == 1.0) {
    std::copy(src.begin(), src.end(), dst.begin());
    return;
  }
  simd::active_kernels().lerp(dst.data(), src.data(), tau, dst.size());
}

}  // namespace nslice::nn
