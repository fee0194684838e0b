#pragma once

#include <cstddef>
#include <vector>

#include "space/approx/mlp.hpp"
#include "space/approx/optimizer.hpp"

namespace space::agent {

struct AgentConfig {
  double gamma = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::size_t epsilon_decay_steps = 10000;  // env steps over which epsilon decays linearly
  std::size_t replay_capacity = 50000;
  std::size_t batch_size = 32;
  std::size_t target_sync_interval = 200;  // optimizer steps between target copies
  double learning_rate = 1e-3;
  approx::OptimizerKind optimizer = approx::OptimizerKind::adam;
  std::vector<std::size_t> hidden_sizes{64, 64};
  approx::Activation activation = approx::Activation::relu;
  double gradient_clip = 0.0;  // global L2 norm clip, 0 disables

  // Throws invalid_argument_error listing the first violated constraint.
  void validate() const;

  bool operator==(const AgentConfig&) const = default;
};

}  // namespace space::agent
