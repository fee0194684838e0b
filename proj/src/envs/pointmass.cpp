#include "space/envs/pointmass.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "space/core/errors.hpp"

namespace space::envs {

std::array<double, 2> pointmass_force_direction(std::size_t action) {
  if (action >= kPointMassActions) {
    throw invalid_action_error("point-mass action " + std::to_string(action));
  }
  return {static_cast<double>(action % 3) - 1.0, static_cast<double>(action / 3) - 1.0};
}

PointMassStep pointmass_step(const PointMassState& state, std::size_t action,
                             const PointMassGoal& goal, const PointMassParams& params) {
  for (double v : state) {
    if (!std::isfinite(v)) throw numeric_domain_error("non-finite point-mass state");
  }
  const auto dir = pointmass_force_direction(action);
  const double dt = params.timestep;
  const double limit = params.position_limit;

  PointMassStep out;
  for (int axis = 0; axis < 2; ++axis) {
    const double force = dir[axis] * params.force_magnitude;
    const double v = state[2 + axis];
    double v_next = v + (force / params.mass - goal.friction * v) * dt;
    double p_next = state[axis] + v_next * dt;
    if (p_next > limit || p_next < -limit) {
      p_next = std::clamp(p_next, -limit, limit);
      v_next = 0.0;
    }
    out.state[axis] = p_next;
    out.state[2 + axis] = v_next;
  }
  const double distance = std::hypot(out.state[0] - goal.x, out.state[1] - goal.y);
  out.reached = distance <= goal.width / 2.0;
  out.reward = -distance + (out.reached ? params.goal_bonus : 0.0);
  return out;
}

PointMassGoal pointmass_goal(const Context& context) {
  if (context.size() != 4) throw invalid_argument_error("point-mass context needs 4 features");
  return {context.features[0], context.features[1], context.features[2], context.features[3]};
}

Context pointmass_context(const PointMassGoal& goal) {
  Context ctx;
  ctx.features = {goal.x, goal.y, goal.width, goal.friction};
  ctx.feature_names = {"goal_x", "goal_y", "goal_width", "friction"};
  ctx.bounds = std::vector<FeatureBounds>{
      {-4.0, 4.0}, {-4.0, 4.0}, {0.5, 8.0}, {0.0, 4.0}};
  return ctx;
}

PointMassEnv::PointMassEnv(PointMassParams params) : params_(params) {}

std::vector<double> PointMassEnv::reset(const Instance& instance) {
  goal_ = pointmass_goal(instance.context);
  context_ = instance.context;
  state_ = {params_.start[0], params_.start[1], 0.0, 0.0};
  steps_ = 0;
  active_ = true;
  return concat_observation({state_.begin(), state_.end()}, context_);
}

StepResult PointMassEnv::step(std::size_t action) {
  if (!active_) throw invalid_state_error("point-mass step called without reset");
  const auto next = pointmass_step(state_, action, goal_, params_);
  state_ = next.state;
  ++steps_;
  const bool done = next.reached || steps_ >= params_.episode_cap;
  if (done) active_ = false;
  return {concat_observation({state_.begin(), state_.end()}, context_), next.reward, done};
}

}  // namespace space::envs
