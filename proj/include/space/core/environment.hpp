#pragma once

#include <cstddef>
#include <vector>

#include "space/core/context.hpp"

namespace space {

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
};

/// Reset/step interface for one contextual MDP family. Observations are the
/// environment state followed by the active instance's context features.
class ContextualEnvironment {
 public:
  virtual ~ContextualEnvironment() = default;

  virtual std::size_t state_dimension() const = 0;
  virtual std::size_t context_dimension() const = 0;
  virtual std::size_t action_count() const = 0;
  virtual std::size_t episode_cap() const = 0;

  // Must be deterministic per (instance, environment seed).
  virtual std::vector<double> reset(const Instance& instance) = 0;
  virtual StepResult step(std::size_t action) = 0;

  std::size_t observation_dimension() const {
    return state_dimension() + context_dimension();
  }
};

// [state ∥ context], the observation layout used by every environment.
std::vector<double> concat_observation(const std::vector<double>& state,
                                       const Context& context);

}  // namespace space
