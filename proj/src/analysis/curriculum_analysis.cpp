#include "space/analysis/curriculum_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

#include "space/core/errors.hpp"

namespace space::analysis {
namespace {

// Sorts `values` and returns the number of inversions.
std::uint64_t count_inversions(std::vector<std::size_t>& values, std::vector<std::size_t>& scratch,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inversions = count_inversions(values, scratch, lo, mid) +
                             count_inversions(values, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (values[i] <= values[j]) {
      scratch[k++] = values[i++];
    } else {
      inversions += mid - i;
      scratch[k++] = values[j++];
    }
  }
  while (i < mid) scratch[k++] = values[i++];
  while (j < hi) scratch[k++] = values[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            values.begin() + static_cast<std::ptrdiff_t>(lo));
  return inversions;
}

}  // namespace

CurriculumTrace make_trace(std::span<const curriculum::LogRow> rows,
                           std::span<const curriculum::Addition> additions) {
  CurriculumTrace trace;
  for (const auto& row : rows) trace.iterations.push_back(row.ids);
  for (const auto& a : additions) trace.addition_order.push_back(a.id);
  return trace;
}

double kendall_tau(std::span<const InstanceId> order_a, std::span<const InstanceId> order_b) {
  const std::size_t n = order_a.size();
  if (n < 2) throw invalid_argument_error("kendall tau needs at least two ids");
  if (order_b.size() != n) throw invalid_argument_error("orders have different lengths");
  std::map<InstanceId, std::size_t> position_in_b;
  for (std::size_t i = 0; i < n; ++i) {
    if (!position_in_b.emplace(order_b[i], i).second) {
      throw invalid_argument_error("order contains a repeated id");
    }
  }
  std::vector<std::size_t> sequence;
  sequence.reserve(n);
  std::set<InstanceId> seen;
  for (InstanceId id : order_a) {
    auto it = position_in_b.find(id);
    if (it == position_in_b.end() || !seen.insert(id).second) {
      throw invalid_argument_error("orders are not permutations of the same ids");
    }
    sequence.push_back(it->second);
  }
  std::vector<std::size_t> scratch(n);
  const std::uint64_t discordant = count_inversions(sequence, scratch, 0, n);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return (pairs - 2.0 * static_cast<double>(discordant)) / pairs;
}

std::vector<std::vector<double>> pairwise_kendall(
    std::span<const std::vector<InstanceId>> orders) {
  const std::size_t m = orders.size();
  std::vector<std::vector<double>> matrix(m, std::vector<double>(m, 1.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::set<InstanceId> in_j(orders[j].begin(), orders[j].end());
      const std::set<InstanceId> in_i(orders[i].begin(), orders[i].end());
      std::vector<InstanceId> a, b;
      for (InstanceId id : orders[i]) if (in_j.contains(id)) a.push_back(id);
      for (InstanceId id : orders[j]) if (in_i.contains(id)) b.push_back(id);
      matrix[i][j] = a.size() < 2 ? std::numeric_limits<double>::quiet_NaN() : kendall_tau(a, b);
    }
  }
  return matrix;
}

UsageFrequency usage_frequency(const CurriculumTrace& trace, std::size_t total_instances,
                               std::span<const InstanceId> all_ids) {
  UsageFrequency out;
  for (InstanceId id : all_ids) out.counts[id] = 0;
  for (const auto& ids : trace.iterations) {
    for (InstanceId id : std::set<InstanceId>(ids.begin(), ids.end())) ++out.counts[id];
  }
  for (InstanceId id : trace.addition_order) out.counts.try_emplace(id, 0);

  std::map<InstanceId, double> weight;
  const double n = static_cast<double>(total_instances);
  for (std::size_t r = 0; r < trace.addition_order.size(); ++r) {
    const double rank = static_cast<double>(r + 1);
    weight.try_emplace(trace.addition_order[r], n > 0 ? (n - rank + 1.0) / n : 0.0);
  }
  for (const auto& [id, count] : out.counts) {
    auto it = weight.find(id);
    out.weighted[id] = it == weight.end() ? 0.0 : static_cast<double>(count) * it->second;
  }
  return out;
}

Drift curriculum_drift(const CurriculumTrace& trace, const ContextMap& contexts) {
  Drift drift;
  if (trace.iterations.size() < 2) return drift;
  const auto points = normalize_contexts(contexts);
  double diameter = 0.0;
  for (auto a = points.begin(); a != points.end(); ++a) {
    for (auto b = std::next(a); b != points.end(); ++b) {
      diameter = std::max(diameter, euclidean_distance(a->second, b->second));
    }
  }
  if (diameter == 0.0) return drift;

  auto point = [&](InstanceId id) -> const std::vector<double>& {
    auto it = points.find(id);
    if (it == points.end()) throw invalid_argument_error("no context for id " + std::to_string(id));
    return it->second;
  };

  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t t = 1; t < trace.iterations.size(); ++t) {
    const auto& prev = trace.iterations[t - 1];
    const auto& now = trace.iterations[t];
    if (prev.empty() || now.empty()) continue;
    double sum = 0.0;
    for (InstanceId id : now) {
      double best = std::numeric_limits<double>::infinity();
      for (InstanceId p : prev) best = std::min(best, euclidean_distance(point(id), point(p)));
      sum += best;
    }
    const double percent = sum / static_cast<double>(now.size()) / diameter * 100.0;
    total += percent;
    drift.max_percent = std::max(drift.max_percent, percent);
    ++pairs;
  }
  drift.mean_percent = pairs ? total / static_cast<double>(pairs) : 0.0;
  return drift;
}

namespace {

template <typename DeltaFn>
Forgetting flag_decays(const InstanceEvalSeries& series, DeltaFn delta_for) {
  Forgetting out;
  for (const auto& [id, values] : series) {
    if (values.size() < 2) throw invalid_argument_error("forgetting needs series of length >= 2");
    const double peak = *std::max_element(values.begin(), values.end());
    if (values.back() < peak - delta_for(peak)) out.ids.push_back(id);
  }
  out.count = out.ids.size();
  return out;
}

}  // namespace

Forgetting forgetting_count(const InstanceEvalSeries& series, double delta) {
  if (!(delta > 0.0)) throw invalid_argument_error("forgetting delta must be positive");
  return flag_decays(series, [delta](double) { return delta; });
}

Forgetting forgetting_count_relative(const InstanceEvalSeries& series, double fraction) {
  if (!(fraction > 0.0)) throw invalid_argument_error("forgetting fraction must be positive");
  return flag_decays(series, [fraction](double peak) {
    return std::max(fraction * std::abs(peak), 1e-12);
  });
}

}  // namespace space::analysis
