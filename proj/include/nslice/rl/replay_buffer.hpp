// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nslice/nn/matrix.hpp"
#include "nslice/traffic/rng.hpp"

namespace nslice::rl {

struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Column-organised minibatch ready for the network engine.
struct Batch {
  nn::Matrix states;
  nn::Matrix actions;
  std::vector<double> rewards;
  nn::Matrix next_states;
  std::vector<double> done;  // 1.0 for terminal transitions
  std::vector<std::size_t> indices;

  std::size_t size() const noexcept { return rewards.size(); }
};

/// Fixed-capacity ring of transitions; the oldest entry is overwritten once
/// full. Storage is one flat block of capacity * record width doubles,
/// allocated in the constructor.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t state_dim() const noexcept { return state_dim_; }
  std::size_t action_dim() const noexcept { return action_dim_; }
  std::size_t storage_size() const noexcept { return storage_.size(); }

  /// Throws ContractError on dimension mismatch or non-finite reward.
  void push(std::span<const double> state, std::span<const double> action, double reward,
            std::span<const double> next_state, bool done);
  void push(const Transition& t) { push(t.state, t.action, t.reward, t.next_state, t.done); }

  /// Transition at slot `index` (0 <= index < size()).
  Transition at(std::size_t index) const;

  /// Uniform draw with replacement over the filled slots.
  /// Throws NotReadyError when size() < batch_size, ContractError for batch_size 0.
  void sample(std::size_t batch_size, traffic::RngStream& rng, Batch& out) const;
  std::vector<Transition> sample(std::size_t batch_size, traffic::RngStream& rng) const;

 private:
  const double* record(std::size_t index) const noexcept { return storage_.data() + index * width_; }

  std::size_t capacity_;
  std::size_t state_dim_;
  std::size_t action_dim_;
  std::size_t width_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
  std::vector<double> storage_;
};

}  // namespace nslice::rl
