// SPDX-License-Identifier: Apache-2.0

#include "nslice/nn/mlp.hpp"

#include <cmath>
#include <string>

#include "nslice/errors.hpp"
#include "nslice/simd/kernels.hpp"

namespace nslice::nn {

void transpose(const Matrix& in, Matrix& out) {
  out.resize(in.cols(), in.rows());
  for (std::size_t r = 0; r < in.rows(); ++r) {
    for (std::size_t c = 0; c < in.cols(); ++c) out(c, r) = in(r, c);
  }
}

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "identity";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw ContractError("unknown activation '" + std::string(name) + "'");
}

Mlp::Mlp(std::vector<std::size_t> sizes, std::vector<Activation> activations) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw ContractError("an MLP needs at least an input and an output size");
  if (activations.size() != sizes_.size() - 1) throw ContractError("one activation per weight layer is required");
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw ContractError("layer sizes must be positive");
    LayerLayout layout;
    layout.inputs = sizes_[l];
    layout.outputs = sizes_[l + 1];
    layout.activation = activations[l];
    layout.weight_offset = offset;
    offset += layout.inputs * layout.outputs;
    layout.bias_offset = offset;
    offset += layout.outputs;
    layers_.push_back(layout);
  }
  params_.assign(offset, 0.0);
}

std::vector<Activation> Mlp::activations() const {
  std::vector<Activation> out;
  for (const LayerLayout& l : layers_) out.push_back(l.activation);
  return out;
}

std::span<double> Mlp::weights(std::size_t layer) noexcept {
  const LayerLayout& l = layers_[layer];
  return {params_.data() + l.weight_offset, l.inputs * l.outputs};
}

std::span<const double> Mlp::weights(std::size_t layer) const noexcept {
  const LayerLayout& l = layers_[layer];
  return {params_.data() + l.weight_offset, l.inputs * l.outputs};
}

std::span<double> Mlp::bias(std::size_t layer) noexcept {
  const LayerLayout& l = layers_[layer];
  return {params_.data() + l.bias_offset, l.outputs};
}

std::span<const double> Mlp::bias(std::size_t layer) const noexcept {
  const LayerLayout& l = layers_[layer];
  return {params_.data() + l.bias_offset, l.outputs};
}

bool Mlp::same_architecture(const Mlp& other) const noexcept {
  if (sizes_ != other.sizes_ || layers_.size() != other.layers_.size()) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].activation != other.layers_[l].activation) return false;
  }
  return true;
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Matrix batch(1, input.size());
  std::copy(input.begin(), input.end(), batch.data());
  ForwardTrace trace;
  forward(batch, trace);
  const std::span<const double> out = trace.output().values();
  return {out.begin(), out.end()};
}

void Mlp::forward(const Matrix& batch, ForwardTrace& trace) const {
  if (batch.cols() != input_size()) throw ContractError("input width does not match the network");
  const simd::KernelTable& k = simd::active_kernels();
  const std::size_t rows = batch.rows();
  trace.activations.resize(layers_.size() + 1);
  trace.activations[0] = batch;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerLayout& layer = layers_[l];
    const Matrix& x = trace.activations[l];
    Matrix& y = trace.activations[l + 1];
    y.resize(rows, layer.outputs);
    k.gemm(rows, layer.outputs, layer.inputs, x.data(), layer.inputs, params_.data() + layer.weight_offset,
           layer.outputs, y.data(), layer.outputs, false);
    k.add_row_bias(y.data(), rows, layer.outputs, params_.data() + layer.bias_offset);
    switch (layer.activation) {
      case Activation::relu: k.relu(y.data(), y.size()); break;
      case Activation::tanh:
        for (double& v : y.values()) v = std::tanh(v);
        break;
      case Activation::identity: break;
    }
  }
}

void backward(const Mlp& net, const ForwardTrace& trace, const Matrix& upstream, GradientSet& out,
              BackwardScratch& scratch, bool parameter_gradients) {
  const auto& layers = net.layers();
  if (trace.activations.size() != layers.size() + 1) throw ContractError("forward trace does not match the network");
  const std::size_t rows = trace.activations[0].rows();
  if (upstream.rows() != rows || upstream.cols() != net.output_size()) {
    throw ContractError("upstream gradient shape does not match the network output");
  }
  const simd::KernelTable& k = simd::active_kernels();
  if (parameter_gradients) out.parameters.assign(net.parameter_count(), 0.0);

  scratch.delta = upstream;
  const std::span<const double> params = net.parameters();
  for (std::size_t li = layers.size(); li-- > 0;) {
    const LayerLayout& layer = layers[li];
    const Matrix& x = trace.activations[li];
    const Matrix& y = trace.activations[li + 1];
    switch (layer.activation) {
      case Activation::relu: k.relu_backward(y.data(), scratch.delta.data(), scratch.delta.size()); break;
      case Activation::tanh: k.tanh_backward(y.data(), scratch.delta.data(), scratch.delta.size()); break;
      case Activation::identity: break;
    }
    if (parameter_gradients) {
      transpose(x, scratch.transposed);
      k.gemm(layer.inputs, layer.outputs, rows, scratch.transposed.data(), rows, scratch.delta.data(),
             layer.outputs, out.parameters.data() + layer.weight_offset, layer.outputs, false);
      k.column_sums(scratch.delta.data(), rows, layer.outputs, out.parameters.data() + layer.bias_offset);
    }
    // Input-major weights (in x out) transposed to (out x in) for delta * W^T.
    scratch.transposed.resize(layer.outputs, layer.inputs);
    const double* w = params.data() + layer.weight_offset;
    for (std::size_t i = 0; i < layer.inputs; ++i) {
      for (std::size_t o = 0; o < layer.outputs; ++o) scratch.transposed(o, i) = w[i * layer.outputs + o];
    }
    scratch.next_delta.resize(rows, layer.inputs);
    k.gemm(rows, layer.inputs, layer.outputs, scratch.delta.data(), layer.outputs, scratch.transposed.data(),
           layer.inputs, scratch.next_delta.data(), layer.inputs, false);
    std::swap(scratch.delta, scratch.next_delta);
  }
  out.input = scratch.delta;
}

GradientSet backward(const Mlp& net, std::span<const double> input, std::span<const double> upstream) {
  if (input.size() != net.input_size()) throw ContractError("input width does not match the network");
  if (upstream.size() != net.output_size()) throw ContractError("upstream width does not match the network output");
  Matrix x(1, input.size());
  std::copy(input.begin(), input.end(), x.data());
  Matrix g(1, upstream.size());
  std::copy(upstream.begin(), upstream.end(), g.data());
  ForwardTrace trace;
  net.forward(x, trace);
  GradientSet out;
  BackwardScratch scratch;
  backward(net, trace, g, out, scratch, true);
  return out;
}

Mlp init_params(std::vector<std::size_t> sizes, std::vector<Activation> activations, traffic::RngStream& rng,
                double output_scale) {
  Mlp net(std::move(sizes), std::move(activations));
  const std::size_t last = net.layers().size() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.layers()[l].inputs));
    const double scale = l == last ? output_scale : 1.0;
    for (double& w : net.weights(l)) w = scale * rng.uniform(-bound, bound);
    for (double& b : net.bias(l)) b = scale * rng.uniform(-bound, bound);
  }
  return net;
}

}  // namespace nslice::nn
