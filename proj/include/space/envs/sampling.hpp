#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "space/core/context.hpp"
#include "space/core/environment.hpp"
#include "space/envs/cartpole.hpp"
#include "space/envs/maze.hpp"
#include "space/envs/pointmass.hpp"

namespace space::envs {

enum class EnvKind { cartpole, pointmass, maze };

std::string_view to_string(EnvKind kind) noexcept;
// Throws invalid_argument_error on unknown names.
EnvKind env_kind_from_string(std::string_view name);

// Short / medium / long pole half-lengths of the replication set.
inline constexpr std::array<double, 3> kCartPoleReplicationLengths{0.25, 0.5, 1.0};

inline constexpr FeatureBounds kPointMassGoalBounds{-4.0, 4.0};
inline constexpr FeatureBounds kPointMassWidthBounds{0.5, 8.0};
inline constexpr FeatureBounds kPointMassFrictionBounds{0.0, 4.0};
// Range for freely drawn (non-replication) pole half-lengths.
inline constexpr FeatureBounds kCartPoleLengthRange{0.25, 1.0};

// Context number `index` of an i.i.d. stream: PointMass uniform within its
// bounds, maze from generate_maze, CartPole uniform pole half-length.
Context draw_context(EnvKind kind, std::uint64_t seed, std::uint64_t index);

// n instances with ids 0..n-1, deterministic per seed. CartPole cycles the
// replication lengths; the other environments use draw_context.
InstanceSet sample_instances(EnvKind kind, std::size_t n, std::uint64_t seed,
                             SetKind set_kind = SetKind::train);

struct EnvParams {
  CartPoleParams cartpole;
  PointMassParams pointmass;
  MazeParams maze;

  bool operator==(const EnvParams&) const = default;
};

std::unique_ptr<ContextualEnvironment> make_environment(EnvKind kind,
                                                        const EnvParams& params,
                                                        std::uint64_t seed);

}  // namespace space::envs
