#include "brap/solver_greedy.hpp"

#include <algorithm>
#include <vector>

#include "brap/error.hpp"
#include "brap/heuristics.hpp"

namespace brap {

BlockingTimes compute_vertex_blocking_time(const Plan& plan) {
  BlockingTimes psi;
  for (const auto& [block, path] : plan.paths) {
    (void)block;
    for (const Action& a : path.actions) {
      switch (a.kind) {
        case ActionKind::Move:
          psi.bump(a.from, a.t + 1);
          psi.bump(a.to, a.t + 1);
          break;
        case ActionKind::Wait:
          psi.bump(a.from, a.t + 1);
          break;
        case ActionKind::Complete:
          psi.bump(a.from, BlockingTimes::kForever);
          break;
      }
    }
  }
  return psi;
}

std::vector<Action> move_blank_to_vertex(const Configuration& cfg, const GridMap& grid,
                                         Vertex u, const std::set<Vertex>& forbidden,
                                         const BlockingTimes& psi) {
  std::vector<Action> out;
  int uc = grid.index(u);
  if (cfg.is_free(uc)) return out;
  auto occ_u = cfg.occupant(uc);
  if (!occ_u || occ_u->kind != BlockKind::NonTarget)
    throw Error(ErrorCode::parameter_error, "pull destination does not hold a non-target",
                -1, {{u.row, u.col}});

  // Layered BFS through non-target cells; the first layer containing a free
  // cell yields the blank, ties broken row-major. Targets, obstacles,
  // completed cells, and forbidden vertices are never entered.
  std::vector<int> pred(grid.size(), -1);
  std::vector<uint8_t> visited(grid.size(), 0);
  visited[uc] = 1;
  std::vector<int> layer{uc}, next;
  int blank = -1;
  while (blank < 0 && !layer.empty()) {
    next.clear();
    int best_free = -1;
    for (int c : layer) {
      for (Vertex nv : neighbors(grid, grid.vertex(c))) {
        int n = grid.index(nv);
        if (visited[n]) continue;
        if (cfg.is_completed_vertex(n) || forbidden.count(nv)) continue;
        auto occ = cfg.occupant(n);
        if (occ && occ->kind == BlockKind::Target) continue;
        visited[n] = 1;
        pred[n] = c;
        if (!occ) {
          if (best_free < 0 || n < best_free) best_free = n;
        } else {
          next.push_back(n);
        }
      }
    }
    if (best_free >= 0) blank = best_free;
    layer.swap(next);
  }
  if (blank < 0)
    throw Error(ErrorCode::no_blank, "no blank reachable to free the vertex", -1,
                {{u.row, u.col}});

  std::vector<int> route;  // u = route.front(), blank = route.back()
  for (int c = blank; c != -1; c = pred[c]) route.push_back(c);
  std::reverse(route.begin(), route.end());

  int t_prev = -1;
  for (int i = static_cast<int>(route.size()) - 2; i >= 0; --i) {
    Vertex from = grid.vertex(route[i]), to = grid.vertex(route[i + 1]);
    BlockId mover = *cfg.occupant(route[i]);  // route cells are pairwise distinct
    int t = std::max({t_prev + 1, psi.at(from), psi.at(to)});
    out.push_back(Action::move(mover, t, from, to));
    t_prev = t;
  }
  return out;
}

SolveResult solve_greedy(const Instance& inst, double budget_seconds) {
  Deadline deadline(budget_seconds);
  SolveResult r;
  Configuration cfg = inst.start;  // committed plans applied as we go
  Plan master;
  TraversalWeights weights = default_weights(inst.costs);
  weights.target_cell = -1.0;  // other targets are immovable to this solver

  std::vector<BlockId> order;
  try {
    order = compute_priority(inst.start, inst);
  } catch (const Error& e) {
    if (e.code != ErrorCode::unreachable_goal) throw;
    r.status = SolveStatus::Failure;  // some target is sealed off outright
    r.detail = e.what();
    return r;
  }
  for (BlockId tgt : order) {
    try {
      if (deadline.expired()) {
        r.status = SolveStatus::Timeout;
        r.detail = "budget exhausted while planning " + to_string(tgt);
        return r;
      }
      BlockingTimes psi = compute_vertex_blocking_time(master);
      LeastBlockingPath lbp = least_blocking_path(cfg, inst.grid, tgt,
                                                  inst.goals.goals_for(tgt.id), weights);
      for (size_t j = 1; j < lbp.vertices.size(); ++j) {
        Vertex from = lbp.vertices[j - 1], to = lbp.vertices[j];
        std::set<Vertex> forbidden(lbp.vertices.begin() + j + 1, lbp.vertices.end());
        for (const Action& a : move_blank_to_vertex(cfg, inst.grid, to, forbidden, psi)) {
          master.add(a);
          cfg.move_block(inst.grid, a.block, a.from, a.to);
          psi.bump(a.from, a.t + 1);
          psi.bump(a.to, a.t + 1);
        }
        int t = std::max(psi.at(from), psi.at(to));
        master.add(Action::move(tgt, t, from, to));
        cfg.move_block(inst.grid, tgt, from, to);
        psi.bump(from, t + 1);
        psi.bump(to, t + 1);
      }
      Vertex goal = lbp.vertices.back();
      master.add(Action::complete(tgt, psi.at(goal), goal));
      cfg.complete_target(inst.grid, tgt.id, goal);
    } catch (const Error& e) {
      if (e.code == ErrorCode::unreachable_goal || e.code == ErrorCode::no_blank) {
        r.status = SolveStatus::Failure;
        r.detail = to_string(tgt) + ": " + e.what();
        return r;
      }
      throw;
    }
  }
  validate(master, inst);
  finish_success(r, inst, std::move(master), deadline.elapsed_ms());
  return r;
}

}  // namespace brap
