#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "space/core/errors.hpp"
#include "space/envs/cartpole.hpp"
#include "space/envs/maze.hpp"
#include "space/envs/pointmass.hpp"
#include "space/envs/sampling.hpp"

using namespace space;
using namespace space::envs;

namespace {

// Equations of motion as a 2x2 linear system in (x_acc, theta_acc), solved by Cramer's rule:
//   (M + m) x_acc + m l cos(th) th_acc = F + m l th_dot^2 sin(th)
//   cos(th) x_acc + (4/3) l th_acc     = g sin(th)
std::pair<double, double> lagrangian_accelerations(double theta, double theta_dot, double force,
                                                   double l) {
  const double M = 1.0, m = 0.1, g = 9.8;
  const double a11 = M + m, a12 = m * l * std::cos(theta);
  const double a21 = std::cos(theta), a22 = 4.0 / 3.0 * l;
  const double b1 = force + m * l * theta_dot * theta_dot * std::sin(theta);
  const double b2 = g * std::sin(theta);
  const double det = a11 * a22 - a12 * a21;
  return {(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
}

// Reference breadth-first search over free cells.
std::optional<std::size_t> bfs(const MazeLayout& layout) {
  if (layout[0] || layout[24]) return std::nullopt;
  std::array<int, 25> dist;
  dist.fill(-1);
  dist[0] = 0;
  std::vector<int> queue{0};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const int r = queue[h] / 5, c = queue[h] % 5;
    const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
    for (const auto& n : nb) {
      if (n[0] < 0 || n[0] > 4 || n[1] < 0 || n[1] > 4) continue;
      const int k = n[0] * 5 + n[1];
      if (layout[k] || dist[k] >= 0) continue;
      dist[k] = dist[queue[h]] + 1;
      queue.push_back(k);
    }
  }
  if (dist[24] < 0) return std::nullopt;
  return std::size_t(dist[24]);
}

}  // namespace

TEST(CartPole, AccelerationsAtRest) {
  const CartPoleParams p;
  const auto acc = cartpole_accelerations({0, 0, 0, 0}, CartPoleAction::push_right, 0.5, p);
  EXPECT_NEAR(acc.pole, -14.634, 1e-3);
  EXPECT_NEAR(acc.cart, 9.756, 1e-3);
}

TEST(CartPole, AccelerationsMatchLinearSystem) {
  const CartPoleParams p;
  for (double theta : {-0.3, -0.05, 0.0, 0.1, 0.2}) {
    for (double theta_dot : {-1.0, 0.0, 0.7}) {
      for (double l : {0.25, 0.5, 1.0}) {
        for (auto action : {CartPoleAction::push_left, CartPoleAction::push_right}) {
          const double f = action == CartPoleAction::push_right ? 10.0 : -10.0;
          const auto [x_acc, th_acc] = lagrangian_accelerations(theta, theta_dot, f, l);
          const auto acc = cartpole_accelerations({0.3, -0.2, theta, theta_dot}, action, l, p);
          EXPECT_NEAR(acc.cart, x_acc, 1e-10);
          EXPECT_NEAR(acc.pole, th_acc, 1e-10);
        }
      }
    }
  }
}

TEST(CartPole, UprightStepRewardsOne) {
  const auto s = cartpole_step({0, 0, 0, 0}, CartPoleAction::push_left, 0.5, CartPoleParams{});
  EXPECT_EQ(s.reward, 1.0);
  EXPECT_FALSE(s.failed);
  EXPECT_NEAR(s.state[1], -0.02 * 9.756, 1e-3);
  EXPECT_NEAR(s.state[0], 0.02 * s.state[1], 1e-15);
}

TEST(CartPole, AngleLimitTerminates) {
  const CartPoleParams p;
  const double limit = 12.0 * std::numbers::pi / 180.0;
  const auto s = cartpole_step({0, 0, limit - 1e-6, 1.0}, CartPoleAction::push_left, 0.5, p);
  EXPECT_GT(s.state[2], limit);
  EXPECT_TRUE(s.failed);
  EXPECT_EQ(s.reward, 0.0);
}

TEST(CartPole, InvalidInputs) {
  const CartPoleParams p;
  EXPECT_THROW(cartpole_step({0, 0, 4.0, 0}, CartPoleAction::push_left, 0.5, p),
               invalid_state_error);
  EXPECT_THROW(cartpole_step({NAN, 0, 0, 0}, CartPoleAction::push_left, 0.5, p),
               numeric_domain_error);
}

TEST(CartPole, EnvEpisodeCapAndDeterministicReset) {
  CartPoleEnv env(CartPoleParams{}, 3);
  const Instance inst{2, cartpole_context(0.5)};
  const auto a = env.reset(inst);
  const auto b = env.reset(inst);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 5u);
  for (int k = 0; k < 4; ++k) EXPECT_LE(std::abs(a[k]), 0.05);
  EXPECT_EQ(a[4], 0.5);
  std::size_t steps = 0;
  bool done = false;
  while (!done) {
    done = env.step(steps % 2).done;
    ++steps;
  }
  EXPECT_LE(steps, 200u);
  EXPECT_THROW(env.step(0), invalid_state_error);
}

TEST(PointMass, StaticWithZeroForce) {
  const PointMassGoal goal{3.0, 4.0, 1.0, 2.0};
  const auto s = pointmass_step({0, 0, 0, 0}, 4, goal, PointMassParams{});
  EXPECT_EQ(s.state[0], 0.0);
  EXPECT_EQ(s.state[1], 0.0);
  EXPECT_DOUBLE_EQ(s.reward, -5.0);
  EXPECT_FALSE(s.reached);
}

TEST(PointMass, GoalBonus) {
  const PointMassGoal goal{1.0, -1.0, 0.5, 0.0};
  const auto s = pointmass_step({1.0, -1.0, 0, 0}, 4, goal, PointMassParams{});
  EXPECT_TRUE(s.reached);
  EXPECT_DOUBLE_EQ(s.reward, 10.0);
}

TEST(PointMass, FrictionDecay) {
  const PointMassGoal goal{0, 0, 1, 4.0};
  PointMassState st{0, 0, 1, 0};
  for (int k = 1; k <= 5; ++k) {
    st = pointmass_step(st, 4, goal, PointMassParams{}).state;
    EXPECT_NEAR(st[2], std::pow(1.0 - 4.0 * 0.05, k), 1e-12);
  }
}

TEST(PointMass, ForceGridAndClamp) {
  EXPECT_EQ(pointmass_force_direction(0), (std::array<double, 2>{-1, -1}));
  EXPECT_EQ(pointmass_force_direction(8), (std::array<double, 2>{1, 1}));
  EXPECT_EQ(pointmass_force_direction(5), (std::array<double, 2>{1, 0}));
  const PointMassGoal goal{0, 0, 1, 0};
  const auto s = pointmass_step({3.99, 0, 10, 0}, 5, goal, PointMassParams{});
  EXPECT_EQ(s.state[0], 4.0);
  EXPECT_EQ(s.state[2], 0.0);
  EXPECT_THROW(pointmass_step({0, 0, 0, 0}, 9, goal, PointMassParams{}), invalid_action_error);
}

TEST(PointMass, ContextRoundTrip) {
  const PointMassGoal goal{1.5, -2.0, 3.0, 0.5};
  const auto ctx = pointmass_context(goal);
  EXPECT_EQ(ctx.feature_names,
            (std::vector<std::string>{"goal_x", "goal_y", "goal_width", "friction"}));
  const auto back = pointmass_goal(ctx);
  EXPECT_EQ(back.x, goal.x);
  EXPECT_EQ(back.friction, goal.friction);
}

TEST(Maze, WallAndGoalRules) {
  MazeLayout layout{};
  layout[1] = 1;
  const MazeParams p;
  const auto blocked = maze_step({0, 0}, MazeAction::right, layout, p);
  EXPECT_EQ(blocked.cell, (MazeCell{0, 0}));
  EXPECT_DOUBLE_EQ(blocked.reward, -0.01);
  const auto off = maze_step({0, 0}, MazeAction::up, layout, p);
  EXPECT_EQ(off.cell, (MazeCell{0, 0}));
  const auto goal = maze_step({3, 4}, MazeAction::down, layout, p);
  EXPECT_TRUE(goal.reached);
  EXPECT_DOUBLE_EQ(goal.reward, 1.0 - 0.01);
  EXPECT_THROW(maze_step({0, 1}, MazeAction::left, layout, p), invalid_state_error);
}

TEST(Maze, GeneratedLayoutsSolvableAndDeterministic) {
  std::set<MazeLayout> distinct;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto layout = generate_maze(seed);
    EXPECT_EQ(layout, generate_maze(seed));
    EXPECT_EQ(layout[0], 0);
    EXPECT_EQ(layout[24], 0);
    const auto reference = bfs(layout);
    ASSERT_TRUE(reference.has_value()) << "seed " << seed;
    EXPECT_EQ(maze_shortest_path(layout), reference);
    EXPECT_TRUE(is_valid_maze(layout));
    distinct.insert(layout);
  }
  EXPECT_GT(distinct.size(), 200u);
}

TEST(Maze, ShortestPathDetectsBlockedMaze) {
  MazeLayout layout{};
  for (int c = 0; c < 5; ++c) layout[2 * 5 + c] = 1;
  EXPECT_FALSE(maze_shortest_path(layout).has_value());
  EXPECT_FALSE(is_valid_maze(layout));
  MazeLayout open{};
  EXPECT_EQ(maze_shortest_path(open), std::optional<std::size_t>(8));
}

TEST(Maze, ContextRoundTripAndObservation) {
  const auto layout = generate_maze(9);
  const auto ctx = maze_context(layout);
  EXPECT_EQ(maze_layout(ctx), layout);
  MazeEnv env;
  const auto obs = env.reset({0, ctx});
  ASSERT_EQ(obs.size(), 27u);
  EXPECT_EQ(obs[0], 0.0);
  EXPECT_EQ(obs[1], 0.0);
  for (std::size_t k = 0; k < 25; ++k) EXPECT_EQ(obs[2 + k], double(layout[k]));
}

TEST(Sampling, PointMassWithinBounds) {
  const auto set = sample_instances(EnvKind::pointmass, 100, 7);
  ASSERT_EQ(set.size(), 100u);
  for (const auto& inst : set) {
    const auto& f = inst.context.features;
    EXPECT_GE(f[0], -4.0);
    EXPECT_LE(f[0], 4.0);
    EXPECT_GE(f[1], -4.0);
    EXPECT_LE(f[1], 4.0);
    EXPECT_GE(f[2], 0.5);
    EXPECT_LE(f[2], 8.0);
    EXPECT_GE(f[3], 0.0);
    EXPECT_LE(f[3], 4.0);
  }
}

TEST(Sampling, DeterministicAndSingleton) {
  for (auto kind : {EnvKind::cartpole, EnvKind::pointmass, EnvKind::maze}) {
    EXPECT_EQ(sample_instances(kind, 10, 3), sample_instances(kind, 10, 3));
    const auto one = sample_instances(kind, 1, 3);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].id, 0u);
  }
  EXPECT_NE(sample_instances(EnvKind::pointmass, 5, 1), sample_instances(EnvKind::pointmass, 5, 2));
  EXPECT_THROW(sample_instances(EnvKind::maze, 0, 1), invalid_argument_error);
}

TEST(Sampling, CartPoleReplicationLengths) {
  const auto set = sample_instances(EnvKind::cartpole, 3, 0);
  EXPECT_EQ(set[0].context.features[0], 0.25);
  EXPECT_EQ(set[1].context.features[0], 0.5);
  EXPECT_EQ(set[2].context.features[0], 1.0);
}

TEST(Sampling, EnvKindNames) {
  EXPECT_EQ(env_kind_from_string("maze"), EnvKind::maze);
  EXPECT_THROW(env_kind_from_string("hopper"), invalid_argument_error);
  const auto env = make_environment(EnvKind::pointmass, EnvParams{}, 0);
  EXPECT_EQ(env->observation_dimension(), 8u);
}
