#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "space/agent/agent_config.hpp"
#include "space/curriculum/scheduler.hpp"
#include "space/envs/sampling.hpp"

namespace space::harness {

enum class SchedulerKind { space, cspace, round_robin };

std::string_view to_string(SchedulerKind kind) noexcept;
SchedulerKind scheduler_kind_from_string(std::string_view name);

struct ExperimentConfig {
  envs::EnvKind environment = envs::EnvKind::pointmass;
  SchedulerKind scheduler = SchedulerKind::space;
  curriculum::SchedulerConfig scheduler_config;
  agent::AgentConfig agent;
  envs::EnvParams env_params;
  std::size_t n_train = 100;
  std::size_t n_test = 100;
  std::uint64_t instance_seed = 0;
  std::vector<std::uint64_t> seeds{0};
  std::size_t iterations = 100;    // curriculum iterations T
  std::size_t max_episodes = 0;    // training-episode budget per seed, 0 = unlimited
  std::size_t eval_interval = 0;   // training episodes between evaluations, 0 = n_train
  std::size_t workers = 1;         // seeds evaluated concurrently
  std::string output_dir = "runs/default";

  std::size_t effective_eval_interval() const noexcept {
    return eval_interval == 0 ? n_train : eval_interval;
  }

  // Every violated constraint, one message each. Empty when valid.
  std::vector<std::string> validation_errors() const;
  // Throws invalid_argument_error carrying all messages joined by "; ".
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Environment-specific defaults (eta, network shape, set sizes, budgets).
ExperimentConfig default_config(envs::EnvKind kind);

// Flat `key = value` text, '#' comments. The `environment` key (if present)
// selects the defaults the remaining keys override. Unknown keys and bad
// values are reported together in one invalid_argument_error.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig read_config(const std::string& path);

// Canonical listing of every key; parse_config(format_config(c)) == c.
std::string format_config(const ExperimentConfig& config);

std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace space::harness
