#include "brap/plan.hpp"

#include <algorithm>
#include <cstdlib>

namespace brap {

void Plan::add(const Action& a) {
  Path& p = paths[a.block];
  p.block = a.block;
  auto it = std::upper_bound(
      p.actions.begin(), p.actions.end(), a,
      [](const Action& x, const Action& y) { return x.t < y.t; });
  p.actions.insert(it, a);
}

double action_cost(const Action& a, const CostModel& costs) {
  bool tgt = a.block.kind == BlockKind::Target;
  switch (a.kind) {
    case ActionKind::Move: return tgt ? costs.move_tgt : costs.move_non;
    case ActionKind::Wait: return tgt ? costs.wait_tgt : costs.wait_non;
    case ActionKind::Complete:
      if (!tgt)
        throw Error(ErrorCode::model_error, "complete cost requested for non-target");
      return costs.complete_tgt;
  }
  return 0.0;
}

double path_cost(const Path& p, const CostModel& costs) {
  double sum = 0.0;
  for (const Action& a : p.actions) sum += action_cost(a, costs);
  return sum;
}

Metrics metrics(const Plan& P, const CostModel& costs) {
  Metrics m;
  for (const auto& [block, path] : P.paths) {
    double c = path_cost(path, costs);
    m.composite_cost += c;
    m.makespan = std::max(m.makespan, c);
    for (const Action& a : path.actions)
      if (a.kind == ActionKind::Move) {
        if (block.kind == BlockKind::Target) ++m.moves_target;
        else ++m.moves_nontarget;
      }
  }
  return m;
}

int plan_horizon(const Plan& P) {
  int last = -1;
  for (const auto& [block, path] : P.paths)
    if (!path.actions.empty()) last = std::max(last, path.actions.back().t);
  return last + 1;
}

namespace {

std::pair<int, int> rc(Vertex v) { return {v.row, v.col}; }

}  // namespace

Configuration validate(const Plan& P, const Instance& inst) {
  const GridMap& grid = inst.grid;
  // Bucket actions by timestep, checking per-path invariants on the way.
  std::map<int, std::vector<const Action*>> steps;
  for (const auto& [block, path] : P.paths) {
    if (path.block != block)
      throw Error(ErrorCode::parameter_error,
                  "path keyed under " + to_string(block) + " belongs to " +
                      to_string(path.block));
    int prev_t = -1;
    for (const Action& a : path.actions) {
      if (a.block != block)
        throw Error(ErrorCode::illegal_action,
                    "action references " + to_string(a.block) +
                        " inside the path of " + to_string(block), a.t);
      if (a.t < 0)
        throw Error(ErrorCode::illegal_action, "negative timestep", a.t);
      if (a.t <= prev_t)
        throw Error(ErrorCode::illegal_action,
                    "timestamps of " + to_string(block) +
                        " not strictly increasing", a.t);
      prev_t = a.t;
      steps[a.t].push_back(&a);
    }
  }

  Configuration cfg = inst.start;
  for (const auto& [t, acts] : steps) {
    // Start-of-step occupancy snapshot is simply `cfg` (not yet mutated).
    // Per-action preconditions against it.
    std::map<BlockId, const Action*> move_of;  // movers this step
    for (const Action* a : acts) {
      const auto& pool = a->block.kind == BlockKind::Target
                             ? cfg.target_cells()
                             : cfg.nontarget_cells();
      if (a->block.id < 0 || a->block.id >= static_cast<int>(pool.size()))
        throw Error(ErrorCode::illegal_action,
                    "unknown block " + to_string(a->block), t);
      if (a->block.kind == BlockKind::Target && pool[a->block.id] < 0)
        throw Error(ErrorCode::illegal_action,
                    to_string(a->block) + " acts after completing", t,
                    {rc(a->from)});
      Vertex at = grid.vertex(pool[a->block.id]);
      if (at != a->from)
        throw Error(ErrorCode::illegal_action,
                    to_string(a->block) + " is not at the stated vertex", t,
                    {rc(a->from), rc(at)});
      switch (a->kind) {
        case ActionKind::Move: {
          if (!grid.passable(a->to))
            throw Error(ErrorCode::illegal_action, "move destination impassable",
                        t, {rc(a->to)});
          int dr = a->to.row - a->from.row, dc = a->to.col - a->from.col;
          if (std::abs(dr) + std::abs(dc) != 1)
            throw Error(ErrorCode::illegal_action, "move endpoints not adjacent",
                        t, {rc(a->from), rc(a->to)});
          move_of[a->block] = a;
          break;
        }
        case ActionKind::Wait:
          break;
        case ActionKind::Complete:
          if (a->block.kind != BlockKind::Target)
            throw Error(ErrorCode::illegal_action,
                        "only targets complete", t, {rc(a->from)});
          if (!is_goal_vertex(inst.goals, a->block.id, a->from))
            throw Error(ErrorCode::illegal_action,
                        to_string(a->block) + " completes off its goal set", t,
                        {rc(a->from)});
          break;
      }
    }

    // No two moves may share a destination (simultaneous arrivals).
    std::map<int, BlockId> claimed;
    for (const auto& [b, a] : move_of) {
      auto [it, fresh] = claimed.insert({grid.index(a->to), b});
      if (!fresh)
        throw Error(ErrorCode::vertex_conflict,
                    to_string(it->second) + " and " + to_string(b) +
                        " move into the same vertex", t, {rc(a->to)});
    }

    // Every move destination must be free at the start of the step. When it
    // is not, classify by what the occupant is doing this step.
    for (const auto& [b, a] : move_of) {
      int dest = grid.index(a->to);
      if (cfg.is_completed_vertex(dest))
        throw Error(ErrorCode::illegal_action,
                    to_string(b) + " moves onto a completed vertex", t,
                    {rc(a->to)});
      auto occ = cfg.occupant(dest);
      if (!occ) continue;  // free at start of step
      auto om = move_of.find(*occ);
      if (om != move_of.end()) {
        if (om->second->to == a->from)
          throw Error(ErrorCode::edge_conflict,
                      to_string(b) + " and " + to_string(*occ) +
                          " swap along an edge", t,
                      {rc(a->from), rc(a->to)});
        throw Error(ErrorCode::following_conflict,
                    to_string(b) + " enters the vertex " + to_string(*occ) +
                        " occupies at the start of the step", t, {rc(a->to)});
      }
      throw Error(ErrorCode::illegal_action,
                  to_string(b) + " moves into an occupied vertex", t,
                  {rc(a->to)});
    }

    // Apply: all destinations are free at step start and pairwise distinct,
    // so moves commute; completions only touch the actor's own vertex.
    for (const Action* a : acts)
      if (a->kind == ActionKind::Move)
        cfg.move_block(grid, a->block, a->from, a->to);
    for (const Action* a : acts)
      if (a->kind == ActionKind::Complete)
        cfg.complete_target(grid, a->block.id, a->from);
    cfg.time = t + 1;
  }

  if (!is_terminal(cfg)) {
    std::vector<std::pair<int, int>> left;
    for (int i = 0; i < cfg.num_targets(); ++i)
      if (!cfg.target_completed(i)) left.push_back(rc(grid.vertex(cfg.target_cells()[i])));
    throw Error(ErrorCode::incomplete_target,
                std::to_string(left.size()) + " target(s) never complete",
                cfg.time, left);
  }
  return cfg;
}

void fill_target_waits(Plan& P, const Instance& inst) {
  for (auto& [block, path] : P.paths) {
    if (block.kind != BlockKind::Target) continue;
    auto pos0 = inst.start.position(block);
    if (!pos0) continue;
    Vertex pos = *pos0;
    std::vector<Action> out;
    out.reserve(path.actions.size());
    int next_t = 0;
    for (const Action& a : path.actions) {
      for (int t = next_t; t < a.t; ++t) out.push_back(Action::wait(block, t, pos));
      out.push_back(a);
      if (a.kind == ActionKind::Move) pos = a.to;
      next_t = a.t + 1;
    }
    path.actions = std::move(out);
  }
}

}  // namespace brap
