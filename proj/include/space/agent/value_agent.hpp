#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "space/agent/agent_config.hpp"
#include "space/agent/replay_buffer.hpp"
#include "space/approx/mlp.hpp"
#include "space/approx/optimizer.hpp"
#include "space/core/environment.hpp"
#include "space/core/rng.hpp"
#include "space/core/rollout.hpp"

namespace space::agent {

struct InstanceReturn {
  InstanceId id = 0;
  double mean_return = 0.0;
};

struct TrainingStats {
  std::size_t episodes = 0;
  std::size_t env_steps = 0;
  std::size_t optimizer_steps = 0;
  std::vector<InstanceReturn> per_instance;  // in training order
  std::vector<double> episode_returns;
};

// Index of the largest value, lowest index on ties.
std::size_t greedy_action(std::span<const double> q_values);

/// DQN-style agent over [state ∥ context] observations. The online network's
/// max Q at an instance's start state serves as the value estimate V(s0, c).
class ValueAgent {
 public:
  ValueAgent(std::size_t observation_dim, std::size_t action_count, AgentConfig config,
             std::uint64_t seed);

  std::size_t observation_dim() const noexcept { return observation_dim_; }
  std::size_t action_count() const noexcept { return action_count_; }
  const AgentConfig& config() const noexcept { return config_; }

  std::vector<double> q_values(std::span<const double> observation) const;

  // Greedy: argmax with lowest-index ties. Otherwise epsilon-greedy.
  std::size_t act(std::span<const double> observation, bool greedy);
  double epsilon() const noexcept;

  // One optimizer step of mean-squared TD error; returns the loss.
  double td_update(std::span<const Transition> batch);

  // max_a Q_online(reset(instance), a). Touches the environment only via reset.
  double evaluate_value(ContextualEnvironment& env, const Instance& instance) const;

  TrainingStats train_on_instances(ContextualEnvironment& env,
                                   std::span<const Instance> instances,
                                   std::size_t episodes_per_instance);

  Policy greedy_policy() const;

  const approx::MlpParams& online() const noexcept { return online_; }
  const approx::MlpParams& target() const noexcept { return target_; }
  approx::MlpParams& mutable_online() noexcept { return online_; }
  void sync_target() { target_ = online_; }
  const ReplayBuffer& replay() const noexcept { return replay_; }
  ReplayBuffer& mutable_replay() noexcept { return replay_; }
  std::uint64_t env_steps() const noexcept { return env_steps_; }
  std::uint64_t optimizer_steps() const noexcept { return optimizer_.step; }

  // Metadata header (gamma, epsilon, counters) followed by both networks.
  std::string format_checkpoint() const;
  void load_checkpoint(const std::string& text);

  // Equality of all learning state: networks, optimizer, replay size, counters, rngs.
  bool same_state(const ValueAgent& other) const;

 private:
  std::size_t observation_dim_;
  std::size_t action_count_;
  AgentConfig config_;
  approx::MlpParams online_;
  approx::MlpParams target_;
  approx::OptimizerState optimizer_;
  ReplayBuffer replay_;
  Rng exploration_rng_;
  Rng replay_rng_;
  std::uint64_t env_steps_ = 0;
};

}  // namespace space::agent
