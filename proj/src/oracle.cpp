#include "brap/oracle.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <unordered_map>

namespace brap {

namespace {

// Canonical byte key of a configuration: target cells in id order, then
// non-target cells (sorted when anonymized), then the completed bitmap.
std::string make_key(const Configuration& cfg, bool anonymize) {
  std::string key;
  const auto& tp = cfg.target_cells();
  const auto& np = cfg.nontarget_cells();
  const auto& done = cfg.completed_cells();
  key.reserve((tp.size() + np.size()) * 4 + done.size());
  auto put = [&key](int v) {
    key.push_back(static_cast<char>(v & 0xff));
    key.push_back(static_cast<char>((v >> 8) & 0xff));
    key.push_back(static_cast<char>((v >> 16) & 0xff));
    key.push_back(static_cast<char>((v >> 24) & 0xff));
  };
  for (int c : tp) put(c);
  if (anonymize) {
    std::vector<int> sorted(np.begin(), np.end());
    std::sort(sorted.begin(), sorted.end());
    for (int c : sorted) put(c);
  } else {
    for (int c : np) put(c);
  }
  key.append(done.begin(), done.end());
  return key;
}

struct Node {
  Configuration cfg;
  double g = 0.0;
  std::string parent;  // empty for root
  Action incoming;
};

struct OpenEntry {
  double g;
  std::int64_t seq;  // insertion order breaks cost ties deterministically
  std::string key;

  friend bool operator>(const OpenEntry& a, const OpenEntry& b) {
    if (a.g != b.g) return a.g > b.g;
    return a.seq > b.seq;
  }
};

// Saturating multiply for the pre-search state-count estimate.
std::int64_t sat_mul(std::int64_t a, std::int64_t b, std::int64_t cap) {
  if (a <= 0 || b <= 0) return 0;
  if (a > cap / b) return cap + 1;
  return a * b;
}

std::int64_t estimate_states(const Instance& inst, std::int64_t cap) {
  std::int64_t cells = inst.grid.size() - inst.grid.num_obstacles();
  std::int64_t est = 1;
  for (int i = 0; i < inst.num_targets(); ++i)
    est = sat_mul(est, cells + 1, cap);  // +1: the completed pseudo-position
  // Anonymous non-targets: C(cells, n), accumulated with saturation.
  std::int64_t n = inst.num_nontargets();
  for (std::int64_t k = 1; k <= n && est <= cap; ++k)
    est = sat_mul(est, cells - k + 1, cap) / k;
  return est;
}

}  // namespace

OracleResult oracle_solve(const Instance& inst, std::int64_t state_cap, bool anonymize) {
  inst.check();
  if (estimate_states(inst, state_cap) > state_cap)
    throw Error(ErrorCode::too_large,
                "estimated configuration count exceeds the cap");

  const GridMap& grid = inst.grid;
  const CostModel& costs = inst.costs;
  OracleResult result;

  std::unordered_map<std::string, Node> nodes;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<OpenEntry>> open;
  std::int64_t seq = 0;

  std::string root_key = make_key(inst.start, anonymize);
  nodes[root_key] = Node{inst.start, 0.0, "", Action{}};
  open.push({0.0, seq++, root_key});

  std::string goal_key;
  while (!open.empty()) {
    OpenEntry top = open.top();
    open.pop();
    auto it = nodes.find(top.key);
    if (top.g != it->second.g) continue;  // stale entry
    const Configuration cfg = it->second.cfg;
    const double g = it->second.g;
    ++result.states_explored;

    if (is_terminal(cfg)) {
      goal_key = top.key;
      result.optimal_cost = g;
      break;
    }
    if (static_cast<std::int64_t>(nodes.size()) > state_cap)
      throw Error(ErrorCode::too_large, "configuration count exceeded the cap");

    // Exactly one action per step; every other uncompleted target pays one
    // wait charge for the elapsed timestep.
    double idle_all = costs.wait_tgt * cfg.num_uncompleted();
    auto relax = [&](const Action& a, double step_cost) {
      Configuration next = cfg;
      if (a.kind == ActionKind::Move)
        next.move_block(grid, a.block, a.from, a.to);
      else
        next.complete_target(grid, a.block.id, a.from);
      next.time = cfg.time + 1;
      std::string key = make_key(next, anonymize);
      auto [slot, fresh] = nodes.try_emplace(key);
      double ng = g + step_cost;
      if (fresh || ng < slot->second.g) {
        slot->second = Node{std::move(next), ng, top.key, a};
        open.push({ng, seq++, key});
      }
    };

    for (int i = 0; i < cfg.num_targets(); ++i) {
      if (cfg.target_completed(i)) continue;
      BlockId b{i, BlockKind::Target};
      Vertex at = grid.vertex(cfg.target_cells()[i]);
      double others_idle = idle_all - costs.wait_tgt;  // the actor is busy
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

  if (!result.optimal_cost) return result;  // exhausted: proven infeasible

  // Reconstruct the action chain, re-stamp timesteps 0..k-1, then make the
  // charged target idle time explicit in the plan.
  std::vector<Action> chain;
  for (std::string k = goal_key; k != root_key; k = nodes[k].parent)
    chain.push_back(nodes[k].incoming);
  std::reverse(chain.begin(), chain.end());
  for (size_t t = 0; t < chain.size(); ++t) {
    chain[t].t = static_cast<int>(t);
    result.optimal_plan.add(chain[t]);
  }
  fill_target_waits(result.optimal_plan, inst);
  return result;
}

}  // namespace brap
