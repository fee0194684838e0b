#pragma once

#include <array>
#include <cstdint>
#include <numbers>

#include "space/core/environment.hpp"

namespace space::envs {

struct CartPoleParams {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double force_magnitude = 10.0;
  double timestep = 0.02;
  double angle_limit = 12.0 * std::numbers::pi / 180.0;
  double position_limit = 2.4;
  std::size_t episode_cap = 200;
  // Half-width of the per-instance start-state perturbation.
  double start_spread = 0.05;

  bool operator==(const CartPoleParams&) const = default;
};

enum class CartPoleAction : std::size_t { push_left = 0, push_right = 1 };

// [x, x_dot, theta, theta_dot]
using CartPoleState = std::array<double, 4>;

struct CartPoleAccelerations {
  double cart = 0.0;  // x double-dot
  double pole = 0.0;  // theta double-dot
};

CartPoleAccelerations cartpole_accelerations(const CartPoleState& state,
                                             CartPoleAction action,
                                             double pole_half_length,
                                             const CartPoleParams& params);

struct CartPoleStep {
  CartPoleState state{};
  double reward = 0.0;
  bool failed = false;  // angle or position limit exceeded
};

// One semi-implicit Euler step. Reward is 1 unless the step fails.
// Throws numeric_domain_error on non-finite input, invalid_state_error if |theta| > pi.
CartPoleStep cartpole_step(const CartPoleState& state, CartPoleAction action,
                           double pole_half_length, const CartPoleParams& params);

/// Pole-length CartPole. Context: pole half-length in meters.
class CartPoleEnv final : public ContextualEnvironment {
 public:
  explicit CartPoleEnv(CartPoleParams params = {}, std::uint64_t seed = 0);

  std::size_t state_dimension() const override { return 4; }
  std::size_t context_dimension() const override { return 1; }
  std::size_t action_count() const override { return 2; }
  std::size_t episode_cap() const override { return params_.episode_cap; }

  std::vector<double> reset(const Instance& instance) override;
  StepResult step(std::size_t action) override;

  const CartPoleState& state() const noexcept { return state_; }
  const CartPoleParams& params() const noexcept { return params_; }

 private:
  CartPoleParams params_;
  std::uint64_t seed_;
  Context context_;
  CartPoleState state_{};
  std::size_t steps_ = 0;
  bool active_ = false;
};

Context cartpole_context(double pole_half_length);

}  // namespace space::envs
