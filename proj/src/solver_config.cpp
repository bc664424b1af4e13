#include "brap/solver_config.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>

#include "brap/heuristics.hpp"

namespace brap {

namespace {

// Upper bound on search bookkeeping (closed map + open heap estimate).
constexpr std::size_t kMemoryBudgetBytes = 512ull << 20;

// Duplicate-detection key: target cells in id order, sorted non-target
// cells (identities are interchangeable), completed bitmap. Time excluded.
std::string state_key(const Configuration& cfg) {
  std::string key;
  const auto& tp = cfg.target_cells();
  std::vector<int> np(cfg.nontarget_cells());
  std::sort(np.begin(), np.end());
  const auto& done = cfg.completed_cells();
  key.reserve((tp.size() + np.size()) * 4 + done.size());
  auto put = [&key](int v) {
    for (int s = 0; s < 32; s += 8) key.push_back(static_cast<char>((v >> s) & 0xff));
  };
  for (int c : tp) put(c);
  for (int c : np) put(c);
  key.append(done.begin(), done.end());
  return key;
}

struct NodeRec {
  Configuration cfg;
  double g = 0.0;
  double h = 0.0;
  std::string parent;
  Action incoming;
};

struct OpenEntry {
  double f;
  double h;
  std::int64_t seq;
  std::string key;

  friend bool operator>(const OpenEntry& a, const OpenEntry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  }
};

}  // namespace

SolveResult solve_astar(const Instance& inst, double budget_seconds) {
  inst.check();
  Deadline deadline(budget_seconds);
  SolveResult result;
  const GridMap& grid = inst.grid;
  const CostModel& costs = inst.costs;

  // Heuristic value, or nullopt for dead states (a target can no longer
  // reach any goal; completion only shrinks reachability, so pruning is safe).
  auto h_of = [&](const Configuration& cfg) -> std::optional<double> {
    try {
      return h_state(cfg, inst).value;
    } catch (const Error& e) {
      if (e.code == ErrorCode::unreachable_goal) return std::nullopt;
      throw;
    }
  };

  auto root_h = h_of(inst.start);
  if (!root_h) {
    result.status = SolveStatus::Infeasible;
    result.detail = "a target cannot reach any goal vertex";
    return result;
  }

  std::unordered_map<std::string, NodeRec> nodes;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<OpenEntry>> open;
  std::int64_t seq = 0;

  // Deterministic memory budget: the per-state footprint (configuration,
  // key copies, map overhead) is estimated once, and the search stops with
  // Timeout when the bookkeeping would outgrow the budget. A counted budget
  // keeps results machine-independent, unlike sampling process RSS.
  const std::size_t blocks =
      static_cast<std::size_t>(inst.start.num_targets() + inst.start.num_nontargets());
  const std::size_t n_cells = static_cast<std::size_t>(grid.size());
  const std::size_t state_bytes = 5 * n_cells + 4 * blocks        // configuration
                                  + 3 * (4 * blocks + n_cells)    // key copies
                                  + 160;                          // node overhead
  const std::size_t state_cap = kMemoryBudgetBytes / state_bytes;

  std::string root_key = state_key(inst.start);
  nodes[root_key] = NodeRec{inst.start, 0.0, *root_h, "", Action{}};
  open.push({*root_h, *root_h, seq++, root_key});

  while (!open.empty()) {
    if (nodes.size() + open.size() > state_cap) {
      result.status = SolveStatus::Timeout;
      result.nodes_expanded = seq;
      result.detail = "memory budget exhausted";
      return result;
    }
    OpenEntry top = open.top();
    open.pop();
    auto it = nodes.find(top.key);
    if (top.f != it->second.g + it->second.h) continue;  // stale
    const Configuration cfg = it->second.cfg;
    const double g = it->second.g;

    if (is_terminal(cfg)) {
      std::vector<Action> chain;
      for (std::string k = top.key; k != root_key; k = nodes[k].parent)
        chain.push_back(nodes[k].incoming);
      std::reverse(chain.begin(), chain.end());
      Plan plan;
      for (size_t t = 0; t < chain.size(); ++t) {
        chain[t].t = static_cast<int>(t);
        plan.add(chain[t]);
      }
      finish_success(result, inst, std::move(plan), deadline.elapsed_ms());
      return result;
    }

    if (deadline.expired()) {
      result.status = SolveStatus::Timeout;
      result.nodes_expanded = seq;
      result.detail = "budget exhausted";
      return result;
    }
    ++result.nodes_expanded;

    double idle_all = costs.wait_tgt * cfg.num_uncompleted();
    auto relax = [&](const Action& a, double step_cost) {
      Configuration next = cfg;
      if (a.kind == ActionKind::Move)
        next.move_block(grid, a.block, a.from, a.to);
      else
        next.complete_target(grid, a.block.id, a.from);
      next.time = cfg.time + 1;
      std::string key = state_key(next);
      double ng = g + step_cost;
      auto slot = nodes.find(key);
      if (slot != nodes.end() && ng >= slot->second.g) return;
      std::optional<double> nh =
          slot != nodes.end() ? std::optional<double>(slot->second.h) : h_of(next);
      if (!nh) return;  // dead state
      nodes[key] = NodeRec{std::move(next), ng, *nh, top.key, a};
      open.push({ng + *nh, *nh, seq++, key});
    };

    for (int i = 0; i < cfg.num_targets(); ++i) {
      if (cfg.target_completed(i)) continue;
      BlockId b{i, BlockKind::Target};
      Vertex at = grid.vertex(cfg.target_cells()[i]);
      double others_idle = idle_all - costs.wait_tgt;
      if (is_goal_vertex(inst.goals, i, at))
        relax(Action::complete(b, cfg.time, at), costs.complete_tgt + others_idle);
      for (Vertex nv : neighbors(grid, at))
        if (cfg.is_free(grid.index(nv)))
          relax(Action::move(b, cfg.time, at, nv), costs.move_tgt + others_idle);
    }
    for (int j = 0; j < cfg.num_nontargets(); ++j) {
      BlockId b{j, BlockKind::NonTarget};
      Vertex at = grid.vertex(cfg.nontarget_cells()[j]);
      for (Vertex nv : neighbors(grid, at))
        if (cfg.is_free(grid.index(nv)))
          relax(Action::move(b, cfg.time, at, nv), costs.move_non + idle_all);
    }
  }

  result.status = SolveStatus::Infeasible;
  result.detail = "configuration space exhausted";
  return result;
}

}  // namespace brap
