#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "space/core/environment.hpp"

namespace space::envs {

inline constexpr int kMazeSide = 5;
inline constexpr std::size_t kMazeCells = kMazeSide * kMazeSide;

// Row-major 5x5 grid, 1 = wall, 0 = free.
using MazeLayout = std::array<std::uint8_t, kMazeCells>;

struct MazeCell {
  int row = 0;
  int col = 0;
  bool operator==(const MazeCell&) const = default;
};

inline constexpr MazeCell kMazeStart{0, 0};
inline constexpr MazeCell kMazeGoal{kMazeSide - 1, kMazeSide - 1};

enum class MazeAction : std::size_t { up = 0, down = 1, left = 2, right = 3 };

struct MazeParams {
  double step_penalty = -0.01;
  double goal_reward = 1.0;
  std::size_t episode_cap = 100;

  bool operator==(const MazeParams&) const = default;
};

bool is_wall(const MazeLayout& layout, MazeCell cell);

// Shortest start-to-goal path length in moves, or nullopt if unreachable.
std::optional<std::size_t> maze_shortest_path(const MazeLayout& layout);

// Start and goal free and connected.
bool is_valid_maze(const MazeLayout& layout);

struct MazeStep {
  MazeCell cell;
  double reward = 0.0;
  bool reached = false;
};

// Moves into walls or off the grid leave the position unchanged.
// Throws invalid_state_error if the current cell is a wall.
MazeStep maze_step(MazeCell cell, MazeAction action, const MazeLayout& layout,
                   const MazeParams& params);

// Randomized depth-first carving: the nine even-coordinate cells are rooms,
// the cells between adjacent rooms are opened along a random spanning tree grown
// from a random room. Each remaining wall between two rooms then opens with
// probability 1/4.
MazeLayout generate_maze(std::uint64_t seed);

Context maze_context(const MazeLayout& layout);
MazeLayout maze_layout(const Context& context);

/// Grid maze, start (0,0), goal (4,4). Context: flattened layout.
class MazeEnv final : public ContextualEnvironment {
 public:
  explicit MazeEnv(MazeParams params = {});

  std::size_t state_dimension() const override { return 2; }
  std::size_t context_dimension() const override { return kMazeCells; }
  std::size_t action_count() const override { return 4; }
  std::size_t episode_cap() const override { return params_.episode_cap; }

  std::vector<double> reset(const Instance& instance) override;
  StepResult step(std::size_t action) override;

  MazeCell position() const noexcept { return cell_; }

 private:
  MazeParams params_;
  Context context_;
  MazeLayout layout_{};
  MazeCell cell_{};
  std::size_t steps_ = 0;
  bool active_ = false;
};

}  // namespace space::envs
