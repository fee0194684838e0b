#include "space/core/context_space.hpp"

#include <algorithm>
#include <cmath>

#include "space/core/errors.hpp"

namespace space {

std::map<InstanceId, std::vector<double>> normalize_contexts(const ContextMap& contexts) {
  std::map<InstanceId, std::vector<double>> out;
  if (contexts.empty()) return out;
  const std::size_t k = contexts.begin()->second.size();
  std::vector<double> low(k, 0.0), high(k, 0.0);
  bool first = true;
  for (const auto& [id, ctx] : contexts) {
    if (ctx.size() != k) throw invalid_argument_error("contexts differ in length");
    for (std::size_t f = 0; f < k; ++f) {
      low[f] = first ? ctx.features[f] : std::min(low[f], ctx.features[f]);
      high[f] = first ? ctx.features[f] : std::max(high[f], ctx.features[f]);
    }
    first = false;
  }
  for (const auto& [id, ctx] : contexts) {
    std::vector<double> scaled(k, 0.0);
    for (std::size_t f = 0; f < k; ++f) {
      const double range = high[f] - low[f];
      scaled[f] = range > 0.0 ? (ctx.features[f] - low[f]) / range : 0.0;
    }
    out.emplace(id, std::move(scaled));
  }
  return out;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw invalid_argument_error("distance between unequal lengths");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sq);
}

ContextMap context_map(const InstanceSet& set) {
  ContextMap out;
  for (const auto& inst : set) out.emplace(inst.id, inst.context);
  return out;
}

}  // namespace space
