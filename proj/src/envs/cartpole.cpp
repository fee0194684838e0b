#include "space/envs/cartpole.hpp"

#include <cmath>
#include <string>

#include "space/core/errors.hpp"
#include "space/core/rng.hpp"

namespace space::envs {

CartPoleAccelerations cartpole_accelerations(const CartPoleState& state,
                                             CartPoleAction action,
                                             double pole_half_length,
                                             const CartPoleParams& params) {
  const auto [x, x_dot, theta, theta_dot] = state;
  (void)x;
  (void)x_dot;
  const double force =
      action == CartPoleAction::push_right ? params.force_magnitude : -params.force_magnitude;
  const double total_mass = params.cart_mass + params.pole_mass;
  const double pole_mass_length = params.pole_mass * pole_half_length;
  const double cos_theta = std::cos(theta);
  const double sin_theta = std::sin(theta);

  const double temp =
      (force + pole_mass_length * theta_dot * theta_dot * sin_theta) / total_mass;
  const double theta_acc =
      (params.gravity * sin_theta - cos_theta * temp) /
      (pole_half_length *
       (4.0 / 3.0 - params.pole_mass * cos_theta * cos_theta / total_mass));
  const double x_acc = temp - pole_mass_length * theta_acc * cos_theta / total_mass;
  return {x_acc, theta_acc};
}

CartPoleStep cartpole_step(const CartPoleState& state, CartPoleAction action,
                           double pole_half_length, const CartPoleParams& params) {
  for (double v : state) {
    if (!std::isfinite(v)) throw numeric_domain_error("non-finite cart-pole state");
  }
  if (std::abs(state[2]) > std::numbers::pi) {
    throw invalid_state_error("cart-pole angle outside [-pi, pi]");
  }
  if (!(pole_half_length > 0.0)) {
    throw invalid_argument_error("pole half-length must be positive");
  }

  const auto acc = cartpole_accelerations(state, action, pole_half_length, params);
  const double dt = params.timestep;

  CartPoleStep out;
  const double x_dot = state[1] + dt * acc.cart;
  const double theta_dot = state[3] + dt * acc.pole;
  out.state = {state[0] + dt * x_dot, x_dot, state[2] + dt * theta_dot, theta_dot};
  out.failed = std::abs(out.state[0]) > params.position_limit ||
               std::abs(out.state[2]) > params.angle_limit;
  out.reward = out.failed ? 0.0 : 1.0;
  return out;
}

Context cartpole_context(double pole_half_length) {
  Context ctx;
  ctx.features = {pole_half_length};
  ctx.feature_names = {"pole_half_length"};
  return ctx;
}

CartPoleEnv::CartPoleEnv(CartPoleParams params, std::uint64_t seed)
    : params_(params), seed_(seed) {}

std::vector<double> CartPoleEnv::reset(const Instance& instance) {
  if (instance.context.size() != 1 || !(instance.context.features[0] > 0.0)) {
    throw invalid_argument_error("cart-pole instance " + std::to_string(instance.id) +
                                 " needs one positive pole half-length");
  }
  context_ = instance.context;
  Rng rng(derive_seed(seed_, "cartpole-start", instance.id));
  for (auto& v : state_) v = rng.uniform(-params_.start_spread, params_.start_spread);
  steps_ = 0;
  active_ = true;
  return concat_observation({state_.begin(), state_.end()}, context_);
}

StepResult CartPoleEnv::step(std::size_t action) {
  if (!active_) throw invalid_state_error("cart-pole step called without reset");
  if (action >= action_count()) {
    throw invalid_action_error("cart-pole action " + std::to_string(action));
  }
  const auto next = cartpole_step(state_, static_cast<CartPoleAction>(action),
                                  context_.features[0], params_);
  state_ = next.state;
  ++steps_;
  const bool done = next.failed || steps_ >= params_.episode_cap;
  if (done) active_ = false;
  return {concat_observation({state_.begin(), state_.end()}, context_), next.reward, done};
}

}  // namespace space::envs
