// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nslice/nn/matrix.hpp"
#include "nslice/traffic/rng.hpp"

namespace nslice::nn {

enum class Activation { relu, tanh, identity };

std::string_view to_string(Activation a);
/// Throws ContractError for unknown names.
Activation activation_from_string(std::string_view name);

/// Location of one dense layer inside the flat parameter vector.
/// Weights are stored input-major: weight(i, o) = params[weight_offset + i * outputs + o].
struct LayerLayout {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  Activation activation = Activation::identity;
  std::size_t weight_offset = 0;
  std::size_t bias_offset = 0;
};

/// Post-activation values of every layer for one batch; activations[0]
/// is the input and activations.back() the network output.
struct ForwardTrace {
  std::vector<Matrix> activations;

  const Matrix& output() const { return activations.back(); }
};

/// Gradients mirroring an Mlp's flat parameter layout, plus the gradient
/// with respect to the network input (one row per batch sample).
struct GradientSet {
  std::vector<double> parameters;
  Matrix input;
};

/// Reusable buffers for backward().
struct BackwardScratch {
  Matrix delta;
  Matrix next_delta;
  Matrix transposed;
  Matrix layer_grad;
};

/// Fully connected network with per-layer activations; all parameters
/// live in one contiguous vector so optimisers and target averaging are
/// single elementwise passes.
class Mlp {
 public:
  Mlp() = default;

  /// `sizes` lists layer widths including input and output; one activation
  /// per weight layer. Parameters start at zero. Throws ContractError.
  Mlp(std::vector<std::size_t> sizes, std::vector<Activation> activations);

  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  const std::vector<LayerLayout>& layers() const noexcept { return layers_; }
  std::vector<Activation> activations() const;
  std::size_t input_size() const noexcept { return sizes_.empty() ? 0 : sizes_.front(); }
  std::size_t output_size() const noexcept { return sizes_.empty() ? 0 : sizes_.back(); }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::span<double> weights(std::size_t layer) noexcept;
  std::span<const double> weights(std::size_t layer) const noexcept;
  std::span<double> bias(std::size_t layer) noexcept;
  std::span<const double> bias(std::size_t layer) const noexcept;

  bool same_architecture(const Mlp& other) const noexcept;

  std::vector<double> forward(std::span<const double> input) const;
  void forward(const Matrix& batch, ForwardTrace& trace) const;

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.same_architecture(b) && a.params_ == b.params_;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<LayerLayout> layers_;
  std::vector<double> params_;
};

/// Reverse-mode gradients of sum_b <output_b, upstream_b> with respect to
/// every parameter (summed over the batch) and every input row. When
/// `parameter_gradients` is false only `out.input` is filled.
/// Throws ContractError on shape mismatch.
void backward(const Mlp& net, const ForwardTrace& trace, const Matrix& upstream, GradientSet& out,
              BackwardScratch& scratch, bool parameter_gradients = true);

/// Single-sample convenience form.
GradientSet backward(const Mlp& net, std::span<const double> input, std::span<const double> upstream);

/// Uniform fan-in initialisation: every weight and bias in +-1/sqrt(fan_in),
/// with the final layer additionally multiplied by `output_scale`.
Mlp init_params(std::vector<std::size_t> sizes, std::vector<Activation> activations, traffic::RngStream& rng,
                double output_scale = 1.0);

}  // namespace nslice::nn
