#include "space/core/context.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "space/core/errors.hpp"

namespace space {

void Context::validate() const {
  if (features.size() != feature_names.size()) {
    throw invalid_argument_error("context has " + std::to_string(features.size()) +
                                 " features but " + std::to_string(feature_names.size()) +
                                 " feature names");
  }
  if (!bounds) return;
  if (bounds->size() != features.size()) {
    throw invalid_argument_error("context bounds length does not match features");
  }
  for (std::size_t k = 0; k < features.size(); ++k) {
    const auto& b = (*bounds)[k];
    if (!(b.low <= features[k] && features[k] <= b.high)) {
      throw invalid_argument_error("context feature '" + feature_names[k] +
                                   "' outside its bounds");
    }
  }
}

std::string_view to_string(SetKind kind) noexcept {
  return kind == SetKind::train ? "train" : "test";
}

SetKind set_kind_from_string(std::string_view text) {
  if (text == "train") return SetKind::train;
  if (text == "test") return SetKind::test;
  throw invalid_argument_error("unknown instance set kind: " + std::string(text));
}

InstanceSet::InstanceSet(std::vector<Instance> instances, SetKind kind)
    : instances_(std::move(instances)), kind_(kind) {
  validate();
}

void InstanceSet::validate() const {
  std::set<InstanceId> seen;
  for (const auto& inst : instances_) {
    inst.context.validate();
    if (!seen.insert(inst.id).second) {
      throw invalid_argument_error("duplicate instance id " + std::to_string(inst.id));
    }
    if (inst.context.feature_names != instances_.front().context.feature_names) {
      throw invalid_argument_error("instance " + std::to_string(inst.id) +
                                   " has different feature names");
    }
  }
}

const Instance& InstanceSet::by_id(InstanceId id) const {
  auto it = std::find_if(instances_.begin(), instances_.end(),
                         [id](const Instance& inst) { return inst.id == id; });
  if (it == instances_.end()) {
    throw invalid_argument_error("no instance with id " + std::to_string(id));
  }
  return *it;
}

bool InstanceSet::contains(InstanceId id) const noexcept {
  return std::any_of(instances_.begin(), instances_.end(),
                     [id](const Instance& inst) { return inst.id == id; });
}

std::vector<InstanceId> InstanceSet::ids() const {
  std::vector<InstanceId> out;
  out.reserve(instances_.size());
  for (const auto& inst : instances_) out.push_back(inst.id);
  return out;
}

const std::vector<std::string>& InstanceSet::feature_names() const {
  static const std::vector<std::string> empty;
  return instances_.empty() ? empty : instances_.front().context.feature_names;
}

bool are_disjoint(const InstanceSet& a, const InstanceSet& b) {
  std::set<InstanceId> ids;
  std::set<std::vector<double>> contexts;
  for (const auto& inst : a) {
    ids.insert(inst.id);
    contexts.insert(inst.context.features);
  }
  for (const auto& inst : b) {
    if (ids.contains(inst.id) || contexts.contains(inst.context.features)) return false;
  }
  return true;
}

std::vector<double> concat_observation(const std::vector<double>& state,
                                       const Context& context) {
  std::vector<double> obs;
  obs.reserve(state.size() + context.features.size());
  obs.insert(obs.end(), state.begin(), state.end());
  obs.insert(obs.end(), context.features.begin(), context.features.end());
  return obs;
}

}  // namespace space
