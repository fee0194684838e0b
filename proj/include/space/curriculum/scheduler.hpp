#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "space/core/context.hpp"
#include "space/core/context_space.hpp"

namespace space::curriculum {

using ValueMap = std::map<InstanceId, double>;

enum class KappaMode { additive, multiplicative };

std::string_view to_string(KappaMode mode) noexcept;
KappaMode kappa_mode_from_string(std::string_view name);

// Returned by dynamic_eta when the previous mean value is zero.
inline constexpr double kDefaultMaxEta = 1e6;

struct SchedulerConfig {
  double eta = 0.05;
  std::size_t kappa = 1;
  KappaMode kappa_mode = KappaMode::additive;
  bool dynamic_eta = false;
  double epsilon_dyn = 1e-6;
  std::size_t patience = 50;
  double max_eta = kDefaultMaxEta;

  void validate() const;

  bool operator==(const SchedulerConfig&) const = default;
};

struct Addition {
  std::size_t iteration = 0;
  InstanceId id = 0;
  bool operator==(const Addition&) const = default;
};

/// Everything the self-paced scheduler carries between iterations.
/// `current_ids` is the set trained in iteration `iteration + 1`.
struct CurriculumState {
  std::vector<InstanceId> all_ids;  // ascending
  std::vector<InstanceId> current_ids;
  std::size_t set_size = 1;
  ValueMap prev_values;
  double prev_mean_abs = 0.0;
  std::size_t iteration = 0;
  std::vector<Addition> addition_log;
  std::size_t stall_count = 0;  // consecutive checks without growth while incomplete

  // Diagnostics of the most recent step.
  double last_mean_abs = 0.0;
  double last_eta = 0.0;
  bool last_grew = false;
  bool last_dynamic = false;
  bool last_degenerate = false;  // dynamic escalation with zero previous mean

  bool operator==(const CurriculumState&) const = default;
};

// I_curr = {one id drawn uniformly with `seed`}, S = 1, V_0 = 0, prev values 0.
CurriculumState initial_state(std::vector<InstanceId> ids, std::uint64_t seed);

// Performance improvement capacity: signed change of the value estimate.
double pic(double v_now, double v_prev);

double mean_abs_value(const ValueMap& values, std::span<const InstanceId> over_ids);

// v_now within [(1-eta) v_prev, (1+eta) v_prev]; the single point {0} when v_prev = 0.
bool converged(double v_mean_now, double v_mean_prev, double eta);

// (|delta_v| + epsilon_dyn) / |v_prev|, or max_eta when v_prev = 0.
double dynamic_eta(double delta_v, double v_prev, double epsilon_dyn,
                   double max_eta = kDefaultMaxEta);

// The `size` ids with the largest PIC, descending, ties by lower id.
std::vector<InstanceId> space_select(const ValueMap& pics, std::size_t size);

// Keeps `current_ids`, then repeatedly adds the id closest (min normalized
// Euclidean distance) to the growing set, ties by lower id.
std::vector<InstanceId> cspace_select(const ContextMap& contexts,
                                      std::span<const InstanceId> current_ids, std::size_t size);

// One SPaCE step: growth gate on mean |V| over the current set, then PIC
// selection over all instances.
CurriculumState scheduler_step(const CurriculumState& state, const ValueMap& values_all,
                               const SchedulerConfig& config);

// Same growth gate, context-distance selection.
CurriculumState cspace_scheduler_step(const CurriculumState& state, const ValueMap& values_all,
                                      const SchedulerConfig& config, const ContextMap& contexts);

struct RoundRobinPick {
  const Instance& instance;
  std::size_t cursor;
};

// Instances in id order, cyclically; cursor' = (cursor + 1) mod |I|.
RoundRobinPick round_robin_next(std::size_t cursor, const InstanceSet& set);

// Curriculum log CSV `iteration,set_size,ids` (ids ';'-joined in selection order).
struct LogRow {
  std::size_t iteration = 0;
  std::size_t set_size = 0;
  std::vector<InstanceId> ids;
  bool operator==(const LogRow&) const = default;
};

std::string format_curriculum_log(std::span<const LogRow> rows);
std::vector<LogRow> parse_curriculum_log(const std::string& text);

// Addition-order CSV `rank,id,iteration_added`, rank 1-based.
std::string format_addition_log(std::span<const Addition> additions);
std::vector<Addition> parse_addition_log(const std::string& text);

}  // namespace space::curriculum
