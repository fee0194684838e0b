#pragma once

#include <map>
#include <span>
#include <vector>

#include "space/core/context.hpp"

namespace space {

using ContextMap = std::map<InstanceId, Context>;

// Min-max normalizes every feature to [0, 1] over the given contexts; a feature
// with zero range maps to 0.
std::map<InstanceId, std::vector<double>> normalize_contexts(const ContextMap& contexts);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

ContextMap context_map(const InstanceSet& set);

}  // namespace space
