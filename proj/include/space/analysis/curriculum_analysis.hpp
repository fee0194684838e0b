#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "space/core/context.hpp"
#include "space/core/context_space.hpp"
#include "space/curriculum/scheduler.hpp"

namespace space::analysis {

struct CurriculumTrace {
  std::vector<std::vector<InstanceId>> iterations;  // ordered ids trained per iteration
  std::vector<InstanceId> addition_order;           // ids by first inclusion
};

CurriculumTrace make_trace(std::span<const curriculum::LogRow> rows,
                           std::span<const curriculum::Addition> additions);

// id -> one evaluation per curriculum iteration; all series share a length.
using InstanceEvalSeries = std::map<InstanceId, std::vector<double>>;

// Tau-a between two permutations of one id set, by inversion counting.
// Throws invalid_argument_error if the id sets differ or have fewer than 2 ids.
double kendall_tau(std::span<const InstanceId> order_a, std::span<const InstanceId> order_b);

// Matrix of kendall_tau over all pairs of orders, each pair restricted to the
// ids both orders contain (order preserved). Pairs sharing < 2 ids get NaN.
std::vector<std::vector<double>> pairwise_kendall(
    std::span<const std::vector<InstanceId>> orders);

struct UsageFrequency {
  std::map<InstanceId, std::size_t> counts;
  std::map<InstanceId, double> weighted;  // count * (n - rank + 1) / n
};

// `all_ids` adds zero entries for ids never selected.
UsageFrequency usage_frequency(const CurriculumTrace& trace, std::size_t total_instances,
                               std::span<const InstanceId> all_ids = {});

struct Drift {
  double mean_percent = 0.0;
  double max_percent = 0.0;
};

// Per consecutive iteration pair: mean over the new set of the minimum
// normalized distance to the previous set, divided by the context-space
// diameter, in percent. Fewer than two iterations yields zero drift.
Drift curriculum_drift(const CurriculumTrace& trace, const ContextMap& contexts);

struct Forgetting {
  std::size_t count = 0;
  std::vector<InstanceId> ids;
};

// Flags ids whose final value is below (series max - delta).
Forgetting forgetting_count(const InstanceEvalSeries& series, double delta);

// Same with delta = fraction * |max| per instance.
Forgetting forgetting_count_relative(const InstanceEvalSeries& series, double fraction = 0.05);

}  // namespace space::analysis
