#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "space/core/context.hpp"
#include "space/core/environment.hpp"

namespace space {

struct Transition {
  std::vector<double> observation;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_observation;
  bool done = false;
};

struct EpisodeResult {
  double undiscounted_return = 0.0;
  double discounted_return = 0.0;
  std::size_t length = 0;
  std::optional<std::vector<Transition>> trajectory;
};

using Policy = std::function<std::size_t(std::span<const double> observation)>;

// Σ_t γ^t r_t. Throws invalid_argument_error when gamma is outside [0, 1].
double discounted_return(std::span<const double> rewards, double gamma);

// Plays one episode until the environment signals done or max_steps elapse.
EpisodeResult rollout(ContextualEnvironment& env, const Instance& instance,
                      const Policy& policy, std::size_t max_steps, double gamma,
                      bool record_trajectory = false);

// Mean undiscounted return of one rollout per instance, in id order.
double mean_return_over_set(ContextualEnvironment& env, const InstanceSet& set,
                            const Policy& policy, std::size_t max_steps, double gamma);

}  // namespace space
