#pragma once

#include <array>

#include "space/core/environment.hpp"

namespace space::envs {

struct PointMassParams {
  double mass = 1.0;
  double force_magnitude = 10.0;
  double timestep = 0.05;
  double position_limit = 4.0;
  std::size_t episode_cap = 100;
  double goal_bonus = 10.0;
  std::array<double, 2> start{0.0, 0.0};

  bool operator==(const PointMassParams&) const = default;
};

struct PointMassGoal {
  double x = 0.0;
  double y = 0.0;
  double width = 1.0;
  double friction = 0.0;
};

// [x, y, x_dot, y_dot]
using PointMassState = std::array<double, 4>;

inline constexpr std::size_t kPointMassActions = 9;

// Force direction for an action index: 3x3 grid over {-1, 0, +1}^2, x varies fastest.
std::array<double, 2> pointmass_force_direction(std::size_t action);

struct PointMassStep {
  PointMassState state{};
  double reward = 0.0;
  bool reached = false;
};

// v' = v + (F/m - friction v) dt; p' = clamp(p + v' dt). Velocity along an axis
// is zeroed when that axis is clamped. Reward -|p' - goal|, +bonus on success.
PointMassStep pointmass_step(const PointMassState& state, std::size_t action,
                             const PointMassGoal& goal, const PointMassParams& params);

PointMassGoal pointmass_goal(const Context& context);
Context pointmass_context(const PointMassGoal& goal);

/// Point mass steered towards a circular goal on a floor with friction.
/// Context: goal_x, goal_y, goal_width, friction.
class PointMassEnv final : public ContextualEnvironment {
 public:
  explicit PointMassEnv(PointMassParams params = {});

  std::size_t state_dimension() const override { return 4; }
  std::size_t context_dimension() const override { return 4; }
  std::size_t action_count() const override { return kPointMassActions; }
  std::size_t episode_cap() const override { return params_.episode_cap; }

  std::vector<double> reset(const Instance& instance) override;
  StepResult step(std::size_t action) override;

  const PointMassState& state() const noexcept { return state_; }

 private:
  PointMassParams params_;
  Context context_;
  PointMassGoal goal_;
  PointMassState state_{};
  std::size_t steps_ = 0;
  bool active_ = false;
};

}  // namespace space::envs
