#include "space/curriculum/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "space/core/csv.hpp"
#include "space/core/errors.hpp"
#include "space/core/rng.hpp"

namespace space::curriculum {

std::string_view to_string(KappaMode mode) noexcept {
  return mode == KappaMode::additive ? "additive" : "multiplicative";
}

KappaMode kappa_mode_from_string(std::string_view name) {
  if (name == "additive") return KappaMode::additive;
  if (name == "multiplicative") return KappaMode::multiplicative;
  throw invalid_argument_error("unknown kappa mode: '" + std::string(name) + "'");
}

void SchedulerConfig::validate() const {
  if (!(eta > 0.0)) throw invalid_argument_error("eta must be positive");
  if (kappa_mode == KappaMode::additive && kappa < 1) {
    throw invalid_argument_error("additive kappa must be at least 1");
  }
  if (kappa_mode == KappaMode::multiplicative && kappa < 2) {
    throw invalid_argument_error("multiplicative kappa must be at least 2");
  }
  if (!(epsilon_dyn > 0.0)) throw invalid_argument_error("epsilon_dyn must be positive");
  if (!(max_eta > 0.0)) throw invalid_argument_error("max_eta must be positive");
}

CurriculumState initial_state(std::vector<InstanceId> ids, std::uint64_t seed) {
  if (ids.empty()) throw invalid_argument_error("curriculum needs at least one instance");
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw invalid_argument_error("curriculum instance ids must be unique");
  }
  CurriculumState state;
  state.all_ids = std::move(ids);
  Rng rng(derive_seed(seed, "curriculum-start"));
  const InstanceId first = state.all_ids[rng.uniform_index(state.all_ids.size())];
  state.current_ids = {first};
  state.set_size = 1;
  for (InstanceId id : state.all_ids) state.prev_values[id] = 0.0;
  state.addition_log.push_back({1, first});
  return state;
}

double pic(double v_now, double v_prev) { return v_now - v_prev; }

double mean_abs_value(const ValueMap& values, std::span<const InstanceId> over_ids) {
  if (over_ids.empty()) throw invalid_argument_error("mean |V| over an empty id set");
  double total = 0.0;
  for (InstanceId id : over_ids) {
    auto it = values.find(id);
    if (it == values.end()) {
      throw invalid_argument_error("no value for instance " + std::to_string(id));
    }
    total += std::abs(it->second);
  }
  return total / static_cast<double>(over_ids.size());
}

bool converged(double v_mean_now, double v_mean_prev, double eta) {
  if (v_mean_prev == 0.0) return v_mean_now == 0.0;
  const double a = (1.0 - eta) * v_mean_prev;
  const double b = (1.0 + eta) * v_mean_prev;
  return std::min(a, b) <= v_mean_now && v_mean_now <= std::max(a, b);
}

double dynamic_eta(double delta_v, double v_prev, double epsilon_dyn, double max_eta) {
  if (v_prev == 0.0) return max_eta;
  return (std::abs(delta_v) + epsilon_dyn) / std::abs(v_prev);
}

namespace {

bool ranks_before(const std::pair<double, InstanceId>& a, const std::pair<double, InstanceId>& b) {
  if (a.first != b.first) return a.first > b.first;
  return a.second < b.second;
}

std::size_t grown_size(std::size_t size, const SchedulerConfig& config, std::size_t cap) {
  const std::size_t next =
      config.kappa_mode == KappaMode::additive ? size + config.kappa : size * config.kappa;
  return std::min(next, cap);
}

void check_coverage(const CurriculumState& state, const ValueMap& values_all) {
  for (InstanceId id : state.all_ids) {
    if (!values_all.contains(id)) {
      throw invalid_argument_error("value map lacks instance " + std::to_string(id));
    }
  }
}

// Growth gate and bookkeeping shared by both selection criteria. Returns the
// next state with current_ids still to be chosen.
CurriculumState gate(const CurriculumState& state, const ValueMap& values_all,
                     const SchedulerConfig& config) {
  config.validate();
  check_coverage(state, values_all);
  CurriculumState next = state;
  const double v_now = mean_abs_value(values_all, state.current_ids);
  const std::size_t total = state.all_ids.size();

  next.last_mean_abs = v_now;
  next.last_grew = false;
  next.last_dynamic = false;
  next.last_degenerate = false;
  next.last_eta = config.eta;

  if (state.current_ids.size() < total) {
    double eta = config.eta;
    if (config.dynamic_eta && state.stall_count >= config.patience) {
      eta = dynamic_eta(v_now - state.prev_mean_abs, state.prev_mean_abs, config.epsilon_dyn,
                        config.max_eta);
      next.last_dynamic = true;
      next.last_degenerate = state.prev_mean_abs == 0.0;
    }
    next.last_eta = eta;
    if (converged(v_now, state.prev_mean_abs, eta) || next.last_degenerate) {
      next.set_size = grown_size(state.set_size, config, total);
      next.last_grew = true;
      next.stall_count = 0;
    } else {
      ++next.stall_count;
    }
  } else {
    next.stall_count = 0;
  }

  next.prev_values.clear();
  for (InstanceId id : state.all_ids) next.prev_values[id] = values_all.at(id);
  next.prev_mean_abs = v_now;
  next.iteration = state.iteration + 1;
  return next;
}

void log_additions(CurriculumState& next) {
  std::set<InstanceId> seen;
  for (const auto& a : next.addition_log) seen.insert(a.id);
  for (InstanceId id : next.current_ids) {
    if (seen.insert(id).second) next.addition_log.push_back({next.iteration + 1, id});
  }
}

}  // namespace

std::vector<InstanceId> space_select(const ValueMap& pics, std::size_t size) {
  if (pics.empty()) throw invalid_argument_error("no PIC values to select from");
  if (size < 1) throw invalid_argument_error("selection size must be at least 1");
  std::vector<std::pair<double, InstanceId>> ranked;
  ranked.reserve(pics.size());
  for (const auto& [id, d] : pics) ranked.emplace_back(d, id);
  const std::size_t take = std::min(size, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                    ranked.end(), ranks_before);
  std::vector<InstanceId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(ranked[i].second);
  return out;
}

std::vector<InstanceId> cspace_select(const ContextMap& contexts,
                                      std::span<const InstanceId> current_ids, std::size_t size) {
  if (size < current_ids.size()) {
    throw invalid_argument_error("selection size smaller than the current set");
  }
  const auto points = normalize_contexts(contexts);
  std::vector<InstanceId> out(current_ids.begin(), current_ids.end());
  std::set<InstanceId> chosen(out.begin(), out.end());
  for (InstanceId id : out) {
    if (!points.contains(id)) {
      throw invalid_argument_error("no context for instance " + std::to_string(id));
    }
  }
  const std::size_t target = std::min(size, points.size());

  // Minimum distance of every unchosen candidate to the chosen set, kept incrementally.
  std::map<InstanceId, double> nearest;
  for (const auto& [id, p] : points) {
    if (chosen.contains(id)) continue;
    double best = std::numeric_limits<double>::infinity();
    for (InstanceId c : out) best = std::min(best, euclidean_distance(p, points.at(c)));
    nearest[id] = best;
  }
  while (out.size() < target) {
    auto pick = nearest.begin();
    for (auto it = nearest.begin(); it != nearest.end(); ++it) {
      if (it->second < pick->second) pick = it;  // map order gives the lower id on ties
    }
    const InstanceId added = pick->first;
    nearest.erase(pick);
    out.push_back(added);
    chosen.insert(added);
    for (auto& [id, dist] : nearest) {
      dist = std::min(dist, euclidean_distance(points.at(id), points.at(added)));
    }
  }
  return out;
}

CurriculumState scheduler_step(const CurriculumState& state, const ValueMap& values_all,
                               const SchedulerConfig& config) {
  CurriculumState next = gate(state, values_all, config);
  ValueMap pics;
  for (InstanceId id : state.all_ids) {
    auto prev = state.prev_values.find(id);
    pics[id] = pic(values_all.at(id), prev == state.prev_values.end() ? 0.0 : prev->second);
  }
  next.current_ids = space_select(pics, next.set_size);
  log_additions(next);
  return next;
}

CurriculumState cspace_scheduler_step(const CurriculumState& state, const ValueMap& values_all,
                                      const SchedulerConfig& config, const ContextMap& contexts) {
  CurriculumState next = gate(state, values_all, config);
  next.current_ids = cspace_select(contexts, state.current_ids,
                                   std::max(next.set_size, state.current_ids.size()));
  log_additions(next);
  return next;
}

RoundRobinPick round_robin_next(std::size_t cursor, const InstanceSet& set) {
  if (set.empty()) throw invalid_argument_error("round robin over an empty set");
  std::vector<std::size_t> order(set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return set[a].id < set[b].id; });
  const std::size_t position = cursor % set.size();
  return {set[order[position]], (position + 1) % set.size()};
}

std::string format_curriculum_log(std::span<const LogRow> rows) {
  std::ostringstream out;
  out << "iteration,set_size,ids\n";
  for (const auto& row : rows) {
    out << row.iteration << ',' << row.set_size << ',';
    for (std::size_t i = 0; i < row.ids.size(); ++i) out << (i ? ";" : "") << row.ids[i];
    out << '\n';
  }
  return out.str();
}

std::vector<LogRow> parse_curriculum_log(const std::string& text) {
  auto lines = csv::split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "iteration,set_size,ids") {
    throw invalid_argument_error("curriculum log header must be 'iteration,set_size,ids'");
  }
  std::vector<LogRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = csv::split(lines[i], ',');
    if (fields.size() != 3) throw invalid_argument_error("bad curriculum log row: " + lines[i]);
    LogRow row;
    row.iteration = static_cast<std::size_t>(csv::parse_int(fields[0]));
    row.set_size = static_cast<std::size_t>(csv::parse_int(fields[1]));
    if (!fields[2].empty()) {
      for (const auto& id : csv::split(fields[2], ';')) {
        row.ids.push_back(static_cast<InstanceId>(csv::parse_int(id)));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_addition_log(std::span<const Addition> additions) {
  std::ostringstream out;
  out << "rank,id,iteration_added\n";
  for (std::size_t i = 0; i < additions.size(); ++i) {
    out << i + 1 << ',' << additions[i].id << ',' << additions[i].iteration << '\n';
  }
  return out.str();
}

std::vector<Addition> parse_addition_log(const std::string& text) {
  auto lines = csv::split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "rank,id,iteration_added") {
    throw invalid_argument_error("addition log header must be 'rank,id,iteration_added'");
  }
  std::vector<Addition> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = csv::split(lines[i], ',');
    if (fields.size() != 3) throw invalid_argument_error("bad addition log row: " + lines[i]);
    out.push_back({static_cast<std::size_t>(csv::parse_int(fields[2])),
                   static_cast<InstanceId>(csv::parse_int(fields[1]))});
  }
  return out;
}

}  // namespace space::curriculum
