#include "space/agent/replay_buffer.hpp"

#include "space/core/errors.hpp"

namespace space::agent {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw invalid_argument_error("replay capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::push(Transition transition) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(transition));
  } else {
    items_[cursor_] = std::move(transition);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  if (items_.empty()) throw invalid_argument_error("cannot sample from an empty replay buffer");
  std::vector<Transition> batch;
  batch.reserve(count);
  for (std::size_t i = 0; i < count; ++i) batch.push_back(items_[rng.uniform_index(items_.size())]);
  return batch;
}

}  // namespace space::agent
