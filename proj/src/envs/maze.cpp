#include "space/envs/maze.hpp"

#include <deque>
#include <string>
#include <vector>

#include "space/core/errors.hpp"
#include "space/core/rng.hpp"

namespace space::envs {
namespace {

constexpr std::array<std::array<int, 2>, 4> kMoves{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

bool on_grid(MazeCell cell) {
  return cell.row >= 0 && cell.row < kMazeSide && cell.col >= 0 && cell.col < kMazeSide;
}

std::size_t index_of(MazeCell cell) {
  return static_cast<std::size_t>(cell.row * kMazeSide + cell.col);
}

}  // namespace

bool is_wall(const MazeLayout& layout, MazeCell cell) { return layout[index_of(cell)] != 0; }

std::optional<std::size_t> maze_shortest_path(const MazeLayout& layout) {
  if (is_wall(layout, kMazeStart) || is_wall(layout, kMazeGoal)) return std::nullopt;
  std::array<int, kMazeCells> dist;
  dist.fill(-1);
  std::deque<MazeCell> frontier{kMazeStart};
  dist[index_of(kMazeStart)] = 0;
  while (!frontier.empty()) {
    const MazeCell cell = frontier.front();
    frontier.pop_front();
    if (cell == kMazeGoal) return static_cast<std::size_t>(dist[index_of(cell)]);
    for (const auto& [dr, dc] : kMoves) {
      const MazeCell next{cell.row + dr, cell.col + dc};
      if (!on_grid(next) || is_wall(layout, next) || dist[index_of(next)] >= 0) continue;
      dist[index_of(next)] = dist[index_of(cell)] + 1;
      frontier.push_back(next);
    }
  }
  return std::nullopt;
}

bool is_valid_maze(const MazeLayout& layout) {
  for (auto v : layout) {
    if (v > 1) return false;
  }
  return maze_shortest_path(layout).has_value();
}

MazeStep maze_step(MazeCell cell, MazeAction action, const MazeLayout& layout,
                   const MazeParams& params) {
  if (!on_grid(cell) || is_wall(layout, cell)) {
    throw invalid_state_error("maze position (" + std::to_string(cell.row) + "," +
                              std::to_string(cell.col) + ") is not a free cell");
  }
  const auto a = static_cast<std::size_t>(action);
  if (a >= kMoves.size()) throw invalid_action_error("maze action " + std::to_string(a));
  MazeCell next{cell.row + kMoves[a][0], cell.col + kMoves[a][1]};
  if (!on_grid(next) || is_wall(layout, next)) next = cell;

  MazeStep out;
  out.cell = next;
  out.reached = next == kMazeGoal;
  out.reward = params.step_penalty + (out.reached ? params.goal_reward : 0.0);
  return out;
}

MazeLayout generate_maze(std::uint64_t seed) {
  MazeLayout layout;
  layout.fill(1);
  Rng rng(seed);

  // Rooms live on even coordinates; carving removes the wall between two rooms.
  const int rooms_per_side = (kMazeSide + 1) / 2;
  const MazeCell root{2 * static_cast<int>(rng.uniform_index(rooms_per_side)),
                      2 * static_cast<int>(rng.uniform_index(rooms_per_side))};
  std::vector<MazeCell> stack{root};
  layout[index_of(root)] = 0;
  while (!stack.empty()) {
    const MazeCell room = stack.back();
    std::array<MazeCell, 4> options;
    std::size_t count = 0;
    for (const auto& [dr, dc] : kMoves) {
      const MazeCell next{room.row + 2 * dr, room.col + 2 * dc};
      if (on_grid(next) && is_wall(layout, next)) options[count++] = next;
    }
    if (count == 0) {
      stack.pop_back();
      continue;
    }
    const MazeCell next = options[rng.uniform_index(count)];
    layout[index_of({(room.row + next.row) / 2, (room.col + next.col) / 2})] = 0;
    layout[index_of(next)] = 0;
    stack.push_back(next);
  }

  // Braiding: each remaining wall between two rooms opens with probability 1/4.
  for (int r = 0; r < kMazeSide; ++r) {
    for (int c = 0; c < kMazeSide; ++c) {
      if ((r % 2) == (c % 2) || !is_wall(layout, {r, c})) continue;
      if (rng.uniform() < 0.25) layout[index_of({r, c})] = 0;
    }
  }
  return layout;
}

Context maze_context(const MazeLayout& layout) {
  Context ctx;
  ctx.features.reserve(kMazeCells);
  ctx.feature_names.reserve(kMazeCells);
  for (std::size_t k = 0; k < kMazeCells; ++k) {
    ctx.features.push_back(static_cast<double>(layout[k]));
    ctx.feature_names.push_back("cell_" + std::to_string(k));
  }
  ctx.bounds = std::vector<FeatureBounds>(kMazeCells, FeatureBounds{0.0, 1.0});
  return ctx;
}

MazeLayout maze_layout(const Context& context) {
  if (context.size() != kMazeCells) {
    throw invalid_argument_error("maze context needs 25 cells");
  }
  MazeLayout layout;
  for (std::size_t k = 0; k < kMazeCells; ++k) {
    const double v = context.features[k];
    if (v != 0.0 && v != 1.0) throw invalid_argument_error("maze cells must be 0 or 1");
    layout[k] = static_cast<std::uint8_t>(v);
  }
  return layout;
}

MazeEnv::MazeEnv(MazeParams params) : params_(params) {}

std::vector<double> MazeEnv::reset(const Instance& instance) {
  layout_ = maze_layout(instance.context);
  if (!is_valid_maze(layout_)) {
    throw invalid_argument_error("maze instance " + std::to_string(instance.id) +
                                 " is not solvable");
  }
  context_ = instance.context;
  cell_ = kMazeStart;
  steps_ = 0;
  active_ = true;
  return concat_observation({double(cell_.row), double(cell_.col)}, context_);
}

StepResult MazeEnv::step(std::size_t action) {
  if (!active_) throw invalid_state_error("maze step called without reset");
  if (action >= action_count()) throw invalid_action_error("maze action " + std::to_string(action));
  const auto next = maze_step(cell_, static_cast<MazeAction>(action), layout_, params_);
  cell_ = next.cell;
  ++steps_;
  const bool done = next.reached || steps_ >= params_.episode_cap;
  if (done) active_ = false;
  return {concat_observation({double(cell_.row), double(cell_.col)}, context_), next.reward,
          done};
}

}  // namespace space::envs
