#include "brap/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace brap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DijKey {
  double dist;
  int hops;
  int cell;

  friend bool operator>(const DijKey& a, const DijKey& b) {
    if (a.dist != b.dist) return a.dist > b.dist;
    if (a.hops != b.hops) return a.hops > b.hops;
    return a.cell > b.cell;
  }
};

struct DijResult {
  std::vector<double> dist;
  std::vector<int> hops;
  std::vector<int> pred;
};

// Dijkstra from `start` where entering a cell costs `enter_cost(cell)`
// (negative = impassable). Ties broken on hop count, then cell index, making
// both distances and predecessors deterministic.
template <typename EnterCost>
DijResult dijkstra_enter(const GridMap& grid, int start, EnterCost enter_cost) {
  DijResult r{std::vector<double>(grid.size(), kInf),
              std::vector<int>(grid.size(), 0),
              std::vector<int>(grid.size(), -1)};
  std::priority_queue<DijKey, std::vector<DijKey>, std::greater<DijKey>> open;
  r.dist[start] = 0.0;
  open.push({0.0, 0, start});
  while (!open.empty()) {
    DijKey top = open.top();
    open.pop();
    if (top.dist != r.dist[top.cell] || top.hops != r.hops[top.cell]) continue;
    Vertex u = grid.vertex(top.cell);
    for (Vertex nv : neighbors(grid, u)) {
      int v = grid.index(nv);
      double ec = enter_cost(v);
      if (ec < 0) continue;  // impassable
      double nd = top.dist + ec;
      int nh = top.hops + 1;
      if (nd < r.dist[v] || (nd == r.dist[v] && nh < r.hops[v]) ||
          (nd == r.dist[v] && nh == r.hops[v] && top.cell < r.pred[v])) {
        r.dist[v] = nd;
        r.hops[v] = nh;
        r.pred[v] = top.cell;
        open.push({nd, nh, v});
      }
    }
  }
  return r;
}

// Goal with lexicographically least (dist, hops, cell); -1 if none reachable.
int pick_goal(const DijResult& r, const GridMap& grid, const std::vector<Vertex>& goals) {
  int best = -1;
  for (Vertex g : goals) {
    if (!grid.passable(g)) continue;
    int c = grid.index(g);
    if (r.dist[c] == kInf) continue;
    if (best < 0 || r.dist[c] < r.dist[best] ||
        (r.dist[c] == r.dist[best] && r.hops[c] < r.hops[best]) ||
        (r.dist[c] == r.dist[best] && r.hops[c] == r.hops[best] && c < best))
      best = c;
  }
  return best;
}

}  // namespace

TraversalWeights default_weights(const CostModel& costs) {
  return {costs.move_tgt, costs.move_tgt + costs.move_non,
          costs.move_tgt + 2.0 * costs.move_non};
}

LeastBlockingPath least_blocking_path(const Configuration& cfg, const GridMap& grid,
                                      BlockId target, const std::vector<Vertex>& goals,
                                      const TraversalWeights& weights) {
  auto at = cfg.position(target);
  if (!at)
    throw Error(ErrorCode::parameter_error,
                to_string(target) + " not present in configuration");
  if (goals.empty()) throw Error(ErrorCode::parameter_error, "empty goal set");
  int start = grid.index(*at);
  auto enter_cost = [&](int cell) -> double {
    if (cfg.is_completed_vertex(cell)) return -1.0;
    auto occ = cfg.occupant(cell);
    if (!occ) return weights.free_cell;
    if (occ->kind == BlockKind::NonTarget) return weights.nontarget_cell;
    return weights.target_cell;
  };
  DijResult r = dijkstra_enter(grid, start, enter_cost);
  int goal = pick_goal(r, grid, goals);
  if (goal < 0)
    throw Error(ErrorCode::unreachable_goal,
                to_string(target) + " cannot reach any goal vertex", -1,
                {{at->row, at->col}});
  LeastBlockingPath lbp;
  for (int c = goal; c != start; c = r.pred[c]) lbp.vertices.push_back(grid.vertex(c));
  lbp.vertices.push_back(*at);
  std::reverse(lbp.vertices.begin(), lbp.vertices.end());
  lbp.length = static_cast<int>(lbp.vertices.size()) - 1;
  for (size_t k = 1; k < lbp.vertices.size(); ++k)
    if (cfg.occupant(grid.index(lbp.vertices[k]))) ++lbp.blocking;
  return lbp;
}

HState h_state(const Configuration& cfg, const Instance& inst, HAggregate aggregate) {
  const GridMap& grid = inst.grid;
  const CostModel& costs = inst.costs;
  double blocker_move = std::min(costs.move_tgt, costs.move_non);
  HState h;
  h.per_target.assign(cfg.num_targets(), 0.0);
  double sum = 0.0, best_max = 0.0;
  for (int i = 0; i < cfg.num_targets(); ++i) {
    if (cfg.target_completed(i)) continue;
    int start = cfg.target_cells()[i];
    // Value-weight search: minimize L·move_tgt + B·blocker_move directly so
    // the minimizing path and the bound coincide (keeps the bound a true
    // lower bound under any cost model).
    auto enter_cost = [&](int cell) -> double {
      if (cfg.is_completed_vertex(cell)) return -1.0;
      return costs.move_tgt + (cfg.occupant(cell) ? blocker_move : 0.0);
    };
    DijResult r = dijkstra_enter(grid, start, enter_cost);
    int goal = pick_goal(r, grid, inst.goals.goals_for(i));
    if (goal < 0) {
      Vertex at = grid.vertex(start);
      throw Error(ErrorCode::unreachable_goal,
                  to_string(BlockId{i, BlockKind::Target}) +
                      " cannot reach any goal vertex",
                  -1, {{at.row, at.col}});
    }
    double hi = r.dist[goal] + costs.complete_tgt;
    h.per_target[i] = hi;
    sum += hi;
    best_max = std::max(best_max, hi);
  }
  int n = cfg.num_targets();
  h.value = aggregate == HAggregate::Max ? best_max : (n > 0 ? sum / n : 0.0);
  return h;
}

std::vector<BlockId> compute_priority(const Configuration& cfg, const Instance& inst) {
  HState h = h_state(cfg, inst);
  std::vector<BlockId> order;
  for (int i = 0; i < cfg.num_targets(); ++i)
    if (!cfg.target_completed(i)) order.push_back({i, BlockKind::Target});
  std::stable_sort(order.begin(), order.end(), [&](BlockId a, BlockId b) {
    if (h.per_target[a.id] != h.per_target[b.id])
      return h.per_target[a.id] < h.per_target[b.id];
    return a.id < b.id;
  });
  return order;
}

}  // namespace brap
