#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brap/error.hpp"

// Core model: grid world, block identities, goal specifications, cost model,
// dynamic configurations, and single-action transitions.
namespace brap {

struct Vertex {
  int row = 0;
  int col = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;  // row-major order
};

std::string to_string(const Vertex& v);

// Rectangular 4-connected grid with static obstacles.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int height, int width, std::vector<Vertex> obstacles = {});

  int height() const { return height_; }
  int width() const { return width_; }
  int size() const { return height_ * width_; }

  bool in_bounds(Vertex v) const {
    return v.row >= 0 && v.row < height_ && v.col >= 0 && v.col < width_;
  }
  bool is_obstacle(Vertex v) const { return obstacle_[index(v)]; }
  bool passable(Vertex v) const { return in_bounds(v) && !obstacle_[index(v)]; }

  int index(Vertex v) const { return v.row * width_ + v.col; }
  Vertex vertex(int idx) const { return {idx / width_, idx % width_}; }

  std::vector<Vertex> obstacles() const;  // row-major order
  int num_obstacles() const { return num_obstacles_; }

 private:
  int height_ = 0;
  int width_ = 0;
  int num_obstacles_ = 0;
  std::vector<uint8_t> obstacle_;
};

// Non-obstacle 4-connected neighbors in fixed order: up, down, left, right.
std::vector<Vertex> neighbors(const GridMap& grid, Vertex v);

enum class BlockKind : uint8_t { Target, NonTarget };

struct BlockId {
  int id = 0;
  BlockKind kind = BlockKind::Target;

  friend bool operator==(const BlockId&, const BlockId&) = default;
  friend auto operator<=>(const BlockId&, const BlockId&) = default;
};

std::string to_string(const BlockId& b);  // "T3" / "N7"

// Goal vertices: one shared set, or an explicit set per target.
struct GoalSpec {
  bool per_target = false;
  std::vector<Vertex> shared;                  // used when !per_target
  std::map<int, std::vector<Vertex>> by_target;  // used when per_target

  // Goal set for one target (the shared set or its own entry).
  const std::vector<Vertex>& goals_for(int target_id) const;
};

// Per-action costs (Table-1 shape): moves and waits per block kind, and the
// completion cost for targets. Non-targets never complete.
struct CostModel {
  double move_tgt = 2.0;
  double wait_tgt = 1.0;
  double complete_tgt = 2.0;
  double move_non = 2.0;
  double wait_non = 0.0;
};

enum class ActionKind : uint8_t { Move, Wait, Complete };

// One timestep of one block. Wait/Complete use from == to.
struct Action {
  ActionKind kind = ActionKind::Move;
  BlockId block;
  int t = 0;
  Vertex from;
  Vertex to;

  static Action move(BlockId b, int t, Vertex from, Vertex to) {
    return {ActionKind::Move, b, t, from, to};
  }
  static Action wait(BlockId b, int t, Vertex at) {
    return {ActionKind::Wait, b, t, at, at};
  }
  static Action complete(BlockId b, int t, Vertex at) {
    return {ActionKind::Complete, b, t, at, at};
  }

  friend bool operator==(const Action&, const Action&) = default;
};

std::string to_string(const Action& a);

// Placement of every block plus the free and completed vertex sets at one
// timestep. Occupancy, free space, completed vertices, and obstacles always
// partition the vertex set.
class Configuration {
 public:
  Configuration() = default;

  // Builds the t=0 configuration; every cell not listed becomes free.
  Configuration(const GridMap& grid, const std::vector<Vertex>& target_starts,
                const std::vector<Vertex>& nontarget_starts);

  int time = 0;

  // Position lookup; nullopt for completed (removed) targets.
  std::optional<Vertex> position(BlockId b) const;
  int num_targets() const { return static_cast<int>(target_pos_.size()); }
  int num_nontargets() const { return static_cast<int>(nontarget_pos_.size()); }
  int num_uncompleted() const { return num_uncompleted_; }
  bool target_completed(int target_id) const { return target_pos_[target_id] < 0; }

  // Raw vertex indices; -1 for completed targets.
  const std::vector<int>& target_cells() const { return target_pos_; }
  const std::vector<int>& nontarget_cells() const { return nontarget_pos_; }
  const std::vector<uint8_t>& completed_cells() const { return completed_; }

  bool is_completed_vertex(int cell) const { return completed_[cell]; }
  bool is_free(int cell) const { return occupant_[cell] == kFreeCell && !completed_[cell]; }
  // Occupant of a cell, if any (completed vertices hold no block).
  std::optional<BlockId> occupant(int cell) const;

  std::vector<Vertex> free_vertices(const GridMap& grid) const;
  std::vector<Vertex> completed_vertices(const GridMap& grid) const;

  // Mutators used by apply_action / solvers. They keep occupancy consistent.
  void move_block(const GridMap& grid, BlockId b, Vertex from, Vertex to);
  void complete_target(const GridMap& grid, int target_id, Vertex at);

  // Asserts the partition invariant; throws model_error on violation.
  void check_partition(const GridMap& grid) const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.target_pos_ == b.target_pos_ && a.nontarget_pos_ == b.nontarget_pos_ &&
           a.completed_ == b.completed_;  // time deliberately excluded
  }

 private:
  static constexpr int32_t kFreeCell = -1;
  // Obstacle cells are stamped at construction so is_free() can never mistake
  // them for blanks; the value cannot collide with any block encoding.
  static constexpr int32_t kObstacleCell = std::numeric_limits<int32_t>::min();
  int width_ = 0;                   // for decoding cell indices in position()
  std::vector<int> target_pos_;     // target id -> cell index, -1 once completed
  std::vector<int> nontarget_pos_;  // nontarget id -> cell index
  std::vector<uint8_t> completed_;  // per cell
  std::vector<int32_t> occupant_;   // per cell: encoded block, kFreeCell, or kObstacleCell
  int num_uncompleted_ = 0;

  // Cell encoding: target id >= 0, non-target -(id+2); -1 is kFreeCell.
  int32_t encode(BlockId b) const {
    return b.kind == BlockKind::Target ? b.id : -(b.id + 2);
  }
};

struct Instance {
  GridMap grid;
  Configuration start;
  GoalSpec goals;
  CostModel costs;
  std::string label;

  int num_targets() const { return start.num_targets(); }
  int num_nontargets() const { return start.num_nontargets(); }

  // Throws parameter_error / invalid_vertex when core-model invariants fail.
  void check() const;
};

// Pure transition: applies one action, advancing time by one step.
// Throws illegal_action naming the violated clause.
Configuration apply_action(const Configuration& cfg, const GridMap& grid,
                           const GoalSpec& goals, const CostModel& costs,
                           const Action& a);

// True iff no uncompleted target remains.
bool is_terminal(const Configuration& cfg);

// True iff `v` is one of the target's goal vertices.
bool is_goal_vertex(const GoalSpec& goals, int target_id, Vertex v);

}  // namespace brap
