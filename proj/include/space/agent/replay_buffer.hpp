#pragma once

#include <cstddef>
#include <vector>

#include "space/core/rng.hpp"
#include "space/core/rollout.hpp"

namespace space::agent {

/// Fixed-capacity ring buffer of transitions with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition transition);
  std::vector<Transition> sample(std::size_t count, Rng& rng) const;

  std::size_t size() const noexcept { return items_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const Transition& operator[](std::size_t index) const { return items_[index]; }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition> items_;
};

}  // namespace space::agent
