#include "space/core/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "space/core/errors.hpp"

namespace space {

double discounted_return(std::span<const double> rewards, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw invalid_argument_error("discount factor must lie in [0, 1], got " +
                                 std::to_string(gamma));
  }
  double total = 0.0;
  double weight = 1.0;
  for (double r : rewards) {
    total += weight * r;
    weight *= gamma;
  }
  return total;
}

EpisodeResult rollout(ContextualEnvironment& env, const Instance& instance,
                      const Policy& policy, std::size_t max_steps, double gamma,
                      bool record_trajectory) {
  if (max_steps < 1) throw invalid_argument_error("max_steps must be at least 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw invalid_argument_error("discount factor must lie in [0, 1]");
  }

  EpisodeResult result;
  if (record_trajectory) result.trajectory.emplace();

  std::vector<double> obs = env.reset(instance);
  double weight = 1.0;
  for (std::size_t t = 0; t < max_steps; ++t) {
    const std::size_t action = policy(obs);
    if (action >= env.action_count()) {
      throw invalid_action_error("policy chose action " + std::to_string(action) +
                                 " but the environment has " +
                                 std::to_string(env.action_count()));
    }
    StepResult step = env.step(action);
    result.undiscounted_return += step.reward;
    result.discounted_return += weight * step.reward;
    weight *= gamma;
    ++result.length;
    if (record_trajectory) {
      result.trajectory->push_back(
          Transition{obs, action, step.reward, step.observation, step.done});
    }
    obs = std::move(step.observation);
    if (step.done) break;
  }
  return result;
}

double mean_return_over_set(ContextualEnvironment& env, const InstanceSet& set,
                            const Policy& policy, std::size_t max_steps, double gamma) {
  if (set.empty()) throw invalid_argument_error("cannot average over an empty instance set");
  std::vector<const Instance*> ordered;
  for (const auto& inst : set) ordered.push_back(&inst);
  std::sort(ordered.begin(), ordered.end(),
            [](const Instance* a, const Instance* b) { return a->id < b->id; });
  double total = 0.0;
  for (const Instance* inst : ordered) {
    total += rollout(env, *inst, policy, max_steps, gamma).undiscounted_return;
  }
  return total / static_cast<double>(ordered.size());
}

}  // namespace space
