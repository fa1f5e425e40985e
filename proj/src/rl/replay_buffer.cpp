// SPDX-License-Identifier: Apache-2.0

#include "nslice/rl/replay_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nslice/errors.hpp"

namespace nslice::rl {

// Record layout: state | action | reward | next_state | done.
ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim)
    : capacity_(capacity),
      state_dim_(state_dim),
      action_dim_(action_dim),
      width_(2 * state_dim + action_dim + 2),
      storage_(capacity * width_) {
  if (capacity == 0) throw ContractError("replay capacity must be positive");
}

void ReplayBuffer::push(std::span<const double> state, std::span<const double> action, double reward,
                        std::span<const double> next_state, bool done) {
  if (state.size() != state_dim_ || next_state.size() != state_dim_ || action.size() != action_dim_) {
    throw ContractError("transition dimensions do not match the replay buffer");
  }
  if (!std::isfinite(reward)) throw ContractError("transition reward is not finite");
  double* r = storage_.data() + cursor_ * width_;
  r = std::copy(state.begin(), state.end(), r);
  r = std::copy(action.begin(), action.end(), r);
  *r++ = reward;
  r = std::copy(next_state.begin(), next_state.end(), r);
  *r = done ? 1.0 : 0.0;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

Transition ReplayBuffer::at(std::size_t index) const {
  if (index >= size_) throw ContractError("replay index " + std::to_string(index) + " is not filled");
  const double* r = record(index);
  Transition t;
  t.state.assign(r, r + state_dim_);
  r += state_dim_;
  t.action.assign(r, r + action_dim_);
  r += action_dim_;
  t.reward = *r++;
  t.next_state.assign(r, r + state_dim_);
  r += state_dim_;
  t.done = *r != 0.0;
  return t;
}

void ReplayBuffer::sample(std::size_t batch_size, traffic::RngStream& rng, Batch& out) const {
  if (batch_size == 0) throw ContractError("batch size must be positive");
  if (size_ < batch_size) {
    throw NotReadyError("replay holds " + std::to_string(size_) + " transitions, batch needs " +
                        std::to_string(batch_size));
  }
  out.states.resize(batch_size, state_dim_);
  out.actions.resize(batch_size, action_dim_);
  out.next_states.resize(batch_size, state_dim_);
  out.rewards.resize(batch_size);
  out.done.resize(batch_size);
  out.indices.resize(batch_size);
  for (std::size_t b = 0; b < batch_size; ++b) {
    const std::size_t index = static_cast<std::size_t>(rng.index(size_));
    out.indices[b] = index;
    const double* r = record(index);
    std::copy(r, r + state_dim_, out.states.row(b).begin());
    r += state_dim_;
    std::copy(r, r + action_dim_, out.actions.row(b).begin());
    r += action_dim_;
    out.rewards[b] = *r++;
    std::copy(r, r + state_dim_, out.next_states.row(b).begin());
    r += state_dim_;
    out.done[b] = *r;
  }
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size, traffic::RngStream& rng) const {
  Batch batch;
  sample(batch_size, rng, batch);
  std::vector<Transition> out;
  out.reserve(batch_size);
  for (const std::size_t index : batch.indices) out.push_back(at(index));
  return out;
}

}  // namespace nslice::rl
