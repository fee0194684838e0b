#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace space {

using InstanceId = std::uint32_t;

struct FeatureBounds {
  double low = 0.0;
  double high = 0.0;
  bool operator==(const FeatureBounds&) const = default;
};

/// Real-valued description of one instance (goal position, friction, pole
/// length, maze layout, ...). Units are environment specific.
struct Context {
  std::vector<double> features;
  std::vector<std::string> feature_names;
  std::optional<std::vector<FeatureBounds>> bounds;

  std::size_t size() const noexcept { return features.size(); }

  // Throws invalid_argument_error on length mismatch or out-of-bounds values.
  void validate() const;

  bool operator==(const Context&) const = default;
};

struct Instance {
  InstanceId id = 0;
  Context context;

  bool operator==(const Instance&) const = default;
};

enum class SetKind { train, test };

std::string_view to_string(SetKind kind) noexcept;
SetKind set_kind_from_string(std::string_view text);

class InstanceSet {
 public:
  InstanceSet() = default;
  InstanceSet(std::vector<Instance> instances, SetKind kind);

  const std::vector<Instance>& instances() const noexcept { return instances_; }
  SetKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }

  const Instance& operator[](std::size_t index) const { return instances_[index]; }
  auto begin() const noexcept { return instances_.begin(); }
  auto end() const noexcept { return instances_.end(); }

  // Lookup by id; throws invalid_argument_error if absent.
  const Instance& by_id(InstanceId id) const;
  bool contains(InstanceId id) const noexcept;

  std::vector<InstanceId> ids() const;
  const std::vector<std::string>& feature_names() const;

  bool operator==(const InstanceSet&) const = default;

 private:
  void validate() const;

  std::vector<Instance> instances_;
  SetKind kind_ = SetKind::train;
};

// True when no id and no context vector occurs in both sets.
bool are_disjoint(const InstanceSet& a, const InstanceSet& b);

}  // namespace space
