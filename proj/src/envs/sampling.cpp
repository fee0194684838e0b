#include "space/envs/sampling.hpp"

#include <string>

#include "space/core/errors.hpp"
#include "space/core/rng.hpp"

namespace space::envs {

std::string_view to_string(EnvKind kind) noexcept {
  switch (kind) {
    case EnvKind::cartpole: return "cartpole";
    case EnvKind::pointmass: return "pointmass";
    case EnvKind::maze: return "maze";
  }
  return "unknown";
}

EnvKind env_kind_from_string(std::string_view name) {
  if (name == "cartpole") return EnvKind::cartpole;
  if (name == "pointmass") return EnvKind::pointmass;
  if (name == "maze") return EnvKind::maze;
  throw invalid_argument_error("unknown environment kind: '" + std::string(name) + "'");
}

Context draw_context(EnvKind kind, std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t stream = derive_seed(seed, to_string(kind), index);
  switch (kind) {
    case EnvKind::cartpole: {
      Rng rng(stream);
      return cartpole_context(rng.uniform(kCartPoleLengthRange.low, kCartPoleLengthRange.high));
    }
    case EnvKind::pointmass: {
      Rng rng(stream);
      PointMassGoal goal;
      goal.x = rng.uniform(kPointMassGoalBounds.low, kPointMassGoalBounds.high);
      goal.y = rng.uniform(kPointMassGoalBounds.low, kPointMassGoalBounds.high);
      goal.width = rng.uniform(kPointMassWidthBounds.low, kPointMassWidthBounds.high);
      goal.friction = rng.uniform(kPointMassFrictionBounds.low, kPointMassFrictionBounds.high);
      return pointmass_context(goal);
    }
    case EnvKind::maze:
      return maze_context(generate_maze(stream));
  }
  throw invalid_argument_error("unknown environment kind");
}

InstanceSet sample_instances(EnvKind kind, std::size_t n, std::uint64_t seed,
                             SetKind set_kind) {
  if (n < 1) throw invalid_argument_error("instance count must be at least 1");
  std::vector<Instance> instances;
  instances.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Instance inst;
    inst.id = static_cast<InstanceId>(i);
    inst.context = kind == EnvKind::cartpole
                       ? cartpole_context(kCartPoleReplicationLengths[i % 3])
                       : draw_context(kind, seed, i);
    instances.push_back(std::move(inst));
  }
  return InstanceSet(std::move(instances), set_kind);
}

std::unique_ptr<ContextualEnvironment> make_environment(EnvKind kind,
                                                        const EnvParams& params,
                                                        std::uint64_t seed) {
  switch (kind) {
    case EnvKind::cartpole: return std::make_unique<CartPoleEnv>(params.cartpole, seed);
    case EnvKind::pointmass: return std::make_unique<PointMassEnv>(params.pointmass);
    case EnvKind::maze: return std::make_unique<MazeEnv>(params.maze);
  }
  throw invalid_argument_error("unknown environment kind");
}

}  // namespace space::envs
