#include "brap/model.hpp"

#include <algorithm>
#include <sstream>

namespace brap {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_vertex: return "invalid-vertex";
    case ErrorCode::illegal_action: return "illegal-action";
    case ErrorCode::vertex_conflict: return "vertex-conflict";
    case ErrorCode::edge_conflict: return "edge-conflict";
    case ErrorCode::following_conflict: return "following-conflict";
    case ErrorCode::incomplete_target: return "incomplete-target";
    case ErrorCode::unreachable_goal: return "unreachable-goal";
    case ErrorCode::no_blank: return "no-blank";
    case ErrorCode::constraint_conflict: return "constraint-conflict";
    case ErrorCode::unsupported_goal: return "unsupported-goal";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::too_large: return "too-large";
    case ErrorCode::parameter_error: return "parameter-error";
    case ErrorCode::model_error: return "model-error";
  }
  return "unknown";
}

std::string Error::format(ErrorCode code, const std::string& message, int t,
                          const std::vector<std::pair<int, int>>& vertices) {
  std::ostringstream os;
  os << error_code_name(code) << ": " << message;
  if (t >= 0) os << " [t=" << t << "]";
  for (const auto& [r, c] : vertices) os << " (" << r << "," << c << ")";
  return os.str();
}

std::string to_string(const Vertex& v) {
  return "(" + std::to_string(v.row) + "," + std::to_string(v.col) + ")";
}

std::string to_string(const BlockId& b) {
  return (b.kind == BlockKind::Target ? "T" : "N") + std::to_string(b.id);
}

std::string to_string(const Action& a) {
  std::string s = "t " + std::to_string(a.t) + " ";
  switch (a.kind) {
    case ActionKind::Move:
      s += "move " + to_string(a.block) + " " + std::to_string(a.from.row) + "," +
           std::to_string(a.from.col) + " -> " + std::to_string(a.to.row) + "," +
           std::to_string(a.to.col);
      break;
    case ActionKind::Wait:
      s += "wait " + to_string(a.block) + " " + std::to_string(a.from.row) + "," +
           std::to_string(a.from.col);
      break;
    case ActionKind::Complete:
      s += "complete " + to_string(a.block) + " " + std::to_string(a.from.row) + "," +
           std::to_string(a.from.col);
      break;
  }
  return s;
}

GridMap::GridMap(int height, int width, std::vector<Vertex> obstacles)
    : height_(height), width_(width), obstacle_(height * width, 0) {
  if (height < 1 || width < 1)
    throw Error(ErrorCode::parameter_error, "grid dimensions must be >= 1");
  for (Vertex v : obstacles) {
    if (!in_bounds(v))
      throw Error(ErrorCode::invalid_vertex, "obstacle out of bounds", -1,
                  {{v.row, v.col}});
    if (!obstacle_[index(v)]) {
      obstacle_[index(v)] = 1;
      ++num_obstacles_;
    }
  }
}

std::vector<Vertex> GridMap::obstacles() const {
  std::vector<Vertex> out;
  for (int i = 0; i < size(); ++i)
    if (obstacle_[i]) out.push_back(vertex(i));
  return out;
}

std::vector<Vertex> neighbors(const GridMap& grid, Vertex v) {
  if (!grid.in_bounds(v))
    throw Error(ErrorCode::invalid_vertex, "vertex out of bounds", -1, {{v.row, v.col}});
  if (grid.is_obstacle(v))
    throw Error(ErrorCode::invalid_vertex, "vertex is an obstacle", -1, {{v.row, v.col}});
  std::vector<Vertex> out;
  out.reserve(4);
  const Vertex candidates[4] = {{v.row - 1, v.col},   // up
                                {v.row + 1, v.col},   // down
                                {v.row, v.col - 1},   // left
                                {v.row, v.col + 1}};  // right
  for (Vertex c : candidates)
    if (grid.passable(c)) out.push_back(c);
  return out;
}

const std::vector<Vertex>& GoalSpec::goals_for(int target_id) const {
  if (!per_target) return shared;
  auto it = by_target.find(target_id);
  if (it == by_target.end())
    throw Error(ErrorCode::parameter_error,
                "no goal set for target " + std::to_string(target_id));
  return it->second;
}

bool is_goal_vertex(const GoalSpec& goals, int target_id, Vertex v) {
  const auto& set = goals.goals_for(target_id);
  return std::find(set.begin(), set.end(), v) != set.end();
}

Configuration::Configuration(const GridMap& grid,
                             const std::vector<Vertex>& target_starts,
                             const std::vector<Vertex>& nontarget_starts)
    : width_(grid.width()), completed_(grid.size(), 0), occupant_(grid.size(), kFreeCell) {
  for (int i = 0; i < grid.size(); ++i)
    if (grid.is_obstacle(grid.vertex(i))) occupant_[i] = kObstacleCell;
  target_pos_.reserve(target_starts.size());
  nontarget_pos_.reserve(nontarget_starts.size());
  auto place = [&](Vertex v, BlockId b) {
    if (!grid.passable(v))
      throw Error(ErrorCode::invalid_vertex,
                  "block " + brap::to_string(b) + " starts on obstacle or out of bounds",
                  -1, {{v.row, v.col}});
    int idx = grid.index(v);
    if (occupant_[idx] != kFreeCell)
      throw Error(ErrorCode::parameter_error,
                  "two blocks start at the same vertex", -1, {{v.row, v.col}});
    occupant_[idx] = encode(b);
    return idx;
  };
  for (size_t i = 0; i < target_starts.size(); ++i)
    target_pos_.push_back(place(target_starts[i], {static_cast<int>(i), BlockKind::Target}));
  for (size_t j = 0; j < nontarget_starts.size(); ++j)
    nontarget_pos_.push_back(
        place(nontarget_starts[j], {static_cast<int>(j), BlockKind::NonTarget}));
  num_uncompleted_ = static_cast<int>(target_pos_.size());
}

std::optional<Vertex> Configuration::position(BlockId b) const {
  const auto& pool = b.kind == BlockKind::Target ? target_pos_ : nontarget_pos_;
  if (b.id < 0 || b.id >= static_cast<int>(pool.size()))
    throw Error(ErrorCode::parameter_error, "unknown block " + brap::to_string(b));
  int cell = pool[b.id];
  if (cell < 0) return std::nullopt;
  return Vertex{cell / width_, cell % width_};
}

std::optional<BlockId> Configuration::occupant(int cell) const {
  int32_t o = occupant_[cell];
  if (o == kFreeCell || o == kObstacleCell) return std::nullopt;
  if (o >= 0) return BlockId{o, BlockKind::Target};
  return BlockId{-o - 2, BlockKind::NonTarget};
}

std::vector<Vertex> Configuration::free_vertices(const GridMap& grid) const {
  std::vector<Vertex> out;
  for (int i = 0; i < grid.size(); ++i)
    if (!grid.is_obstacle(grid.vertex(i)) && occupant_[i] == kFreeCell && !completed_[i])
      out.push_back(grid.vertex(i));
  return out;
}

std::vector<Vertex> Configuration::completed_vertices(const GridMap& grid) const {
  std::vector<Vertex> out;
  for (int i = 0; i < grid.size(); ++i)
    if (completed_[i]) out.push_back(grid.vertex(i));
  return out;
}

void Configuration::move_block(const GridMap& grid, BlockId b, Vertex from, Vertex to) {
  int fi = grid.index(from);
  int ti = grid.index(to);
  auto& pool = b.kind == BlockKind::Target ? target_pos_ : nontarget_pos_;
  if (pool[b.id] != fi)
    throw Error(ErrorCode::illegal_action,
                "move: block " + brap::to_string(b) + " is not at the source vertex",
                -1, {{from.row, from.col}});
  if (occupant_[ti] != kFreeCell || completed_[ti])
    throw Error(ErrorCode::illegal_action, "move: destination not free", -1,
                {{to.row, to.col}});
  occupant_[fi] = kFreeCell;
  occupant_[ti] = encode(b);
  pool[b.id] = ti;
}

void Configuration::complete_target(const GridMap& grid, int target_id, Vertex at) {
  int idx = grid.index(at);
  if (target_pos_[target_id] != idx)
    throw Error(ErrorCode::illegal_action, "complete: target not at stated vertex", -1,
                {{at.row, at.col}});
  occupant_[idx] = kFreeCell;
  completed_[idx] = 1;
  target_pos_[target_id] = -1;
  --num_uncompleted_;
}

void Configuration::check_partition(const GridMap& grid) const {
  std::vector<int> coverage(grid.size(), 0);
  for (int i = 0; i < grid.size(); ++i) {
    if (grid.is_obstacle(grid.vertex(i))) ++coverage[i];
    if (completed_[i]) ++coverage[i];
    if (occupant_[i] != kFreeCell && occupant_[i] != kObstacleCell) ++coverage[i];
  }
  for (int i = 0; i < grid.size(); ++i)
    if (coverage[i] > 1)
      throw Error(ErrorCode::model_error, "partition invariant violated", time,
                  {{grid.vertex(i).row, grid.vertex(i).col}});
  int placed = 0;
  for (int cell : target_pos_)
    if (cell >= 0) ++placed;
  if (placed != num_uncompleted_)
    throw Error(ErrorCode::model_error, "uncompleted-target count out of sync");
}

void Instance::check() const {
  if (start.num_targets() < 1)
    throw Error(ErrorCode::parameter_error, "instance needs at least one target");
  if (start.time != 0)
    throw Error(ErrorCode::parameter_error, "start configuration must have time 0");
  for (int i = 0; i < grid.size(); ++i)
    if (start.is_completed_vertex(i))
      throw Error(ErrorCode::parameter_error, "start configuration must have no completed vertices");
  auto check_goals = [&](const std::vector<Vertex>& gs) {
    if (gs.empty()) throw Error(ErrorCode::parameter_error, "empty goal set");
    for (Vertex g : gs)
      if (!grid.passable(g))
        throw Error(ErrorCode::invalid_vertex, "goal on obstacle or out of bounds", -1,
                    {{g.row, g.col}});
  };
  if (goals.per_target) {
    for (int i = 0; i < num_targets(); ++i) check_goals(goals.goals_for(i));
  } else {
    check_goals(goals.shared);
  }
  start.check_partition(grid);
}

Configuration apply_action(const Configuration& cfg, const GridMap& grid,
                           const GoalSpec& goals, const CostModel& /*costs*/,
                           const Action& a) {
  Configuration next = cfg;
  auto pos_of = [&](BlockId b) -> Vertex {
    const auto& pool =
        b.kind == BlockKind::Target ? cfg.target_cells() : cfg.nontarget_cells();
    if (b.id < 0 || b.id >= static_cast<int>(pool.size()))
      throw Error(ErrorCode::illegal_action, "unknown block " + to_string(b), cfg.time);
    if (pool[b.id] < 0)
      throw Error(ErrorCode::illegal_action,
                  "block " + to_string(b) + " already completed", cfg.time);
    return grid.vertex(pool[b.id]);
  };
  switch (a.kind) {
    case ActionKind::Move: {
      Vertex at = pos_of(a.block);
      if (at != a.from)
        throw Error(ErrorCode::illegal_action, "move: block not at source", cfg.time,
                    {{a.from.row, a.from.col}});
      if (!grid.passable(a.to))
        throw Error(ErrorCode::illegal_action, "move: destination impassable", cfg.time,
                    {{a.to.row, a.to.col}});
      int dr = a.to.row - a.from.row, dc = a.to.col - a.from.col;
      if (std::abs(dr) + std::abs(dc) != 1)
        throw Error(ErrorCode::illegal_action, "move: vertices not adjacent", cfg.time,
                    {{a.from.row, a.from.col}, {a.to.row, a.to.col}});
      if (!cfg.is_free(grid.index(a.to)))
        throw Error(ErrorCode::illegal_action, "move: destination not free", cfg.time,
                    {{a.to.row, a.to.col}});
      next.move_block(grid, a.block, a.from, a.to);
      break;
    }
    case ActionKind::Wait: {
      Vertex at = pos_of(a.block);
      if (at != a.from)
        throw Error(ErrorCode::illegal_action, "wait: block not at stated vertex",
                    cfg.time, {{a.from.row, a.from.col}});
      break;
    }
    case ActionKind::Complete: {
      if (a.block.kind != BlockKind::Target)
        throw Error(ErrorCode::illegal_action, "complete: only targets complete",
                    cfg.time);
      Vertex at = pos_of(a.block);
      if (at != a.from)
        throw Error(ErrorCode::illegal_action, "complete: target not at stated vertex",
                    cfg.time, {{a.from.row, a.from.col}});
      if (!is_goal_vertex(goals, a.block.id, at))
        throw Error(ErrorCode::illegal_action, "complete: vertex is not a goal",
                    cfg.time, {{at.row, at.col}});
      next.complete_target(grid, a.block.id, at);
      break;
    }
  }
  next.time = cfg.time + 1;
  return next;
}

bool is_terminal(const Configuration& cfg) { return cfg.num_uncompleted() == 0; }

}  // namespace brap
