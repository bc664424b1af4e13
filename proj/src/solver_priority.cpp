#include "brap/solver_priority.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "brap/error.hpp"
#include "brap/heuristics.hpp"

namespace brap {

ConstraintSet compute_constraint(const Plan& plan) {
  ConstraintSet xi;
  for (const auto& [block, path] : plan.paths) {
    (void)block;
    for (const Action& a : path.actions) {
      switch (a.kind) {
        case ActionKind::Move:
          xi.occupied_at[{a.from, a.t}] = a.block;
          xi.must_be_free.insert({a.to, a.t});
          xi.frozen.insert({a.from, a.t});
          xi.frozen.insert({a.to, a.t});
          break;
        case ActionKind::Wait:
          xi.frozen.insert({a.from, a.t});
          break;
        case ActionKind::Complete: {
          auto [it, inserted] = xi.frozen_forever.try_emplace(a.from, a.t);
          if (!inserted) it->second = std::min(it->second, a.t);
          break;
        }
      }
    }
  }
  return xi;
}

namespace {

constexpr std::int64_t kNodeCap = 2'000'000;

struct ForcedMove {
  int from = -1;
  int to = -1;
  bool target = false;  // replayed by occupancy snapshots, not the bitset
};

// Committed plans unrolled over time for fast replay during a sub-search.
struct Timeline {
  int t_latest = -1;  // latest committed timestep, -1 when no plans yet
  int cells = 0;
  std::vector<std::vector<uint8_t>> frozen_at;  // [t][cell], t in [0, t_latest]
  std::vector<std::vector<uint8_t>> tgt_at;     // committed targets, start of step t
  std::vector<std::vector<ForcedMove>> forced;  // committed moves firing at step t
  std::vector<int> completed_from;              // first blocked-forever step, INT_MAX none
  std::vector<std::int64_t> last_use;  // last step committed plans touch the cell

  bool frozen(int t, int c) const {
    if (completed_from[c] <= t) return true;
    return t <= t_latest && frozen_at[t][c] != 0;
  }
  bool prior_target_at(int t, int c) const {
    return t <= t_latest && tgt_at[t][c] != 0;
  }
  const std::vector<ForcedMove>& forced_at(int t) const {
    static const std::vector<ForcedMove> kNone;
    return t <= t_latest ? forced[t] : kNone;
  }
};

Timeline build_timeline(const Instance& inst, const Plan& master,
                        const ConstraintSet& xi) {
  Timeline tl;
  const GridMap& grid = inst.grid;
  tl.cells = grid.height() * grid.width();
  for (const auto& [block, path] : master.paths) {
    (void)block;
    for (const Action& a : path.actions) tl.t_latest = std::max(tl.t_latest, a.t);
  }
  // Two dense byte planes per timestep; refuse absurd unrolls instead of
  // exhausting memory.
  if (static_cast<long long>(tl.t_latest + 2) * tl.cells > 32LL * 1024 * 1024)
    throw Error(ErrorCode::too_large, "committed-plan timeline too large to unroll");

  tl.frozen_at.assign(tl.t_latest + 1, std::vector<uint8_t>(tl.cells, 0));
  tl.tgt_at.assign(tl.t_latest + 1, std::vector<uint8_t>(tl.cells, 0));
  tl.forced.assign(tl.t_latest + 1, {});
  tl.completed_from.assign(tl.cells, std::numeric_limits<int>::max());
  tl.last_use.assign(tl.cells, -1);

  for (const auto& [key, t] : xi.frozen) {
    int c = grid.index(key);
    tl.frozen_at[t][c] = 1;
    tl.last_use[c] = std::max(tl.last_use[c], static_cast<std::int64_t>(t));
  }
  for (const auto& [v, t0] : xi.frozen_forever) {
    int c = grid.index(v);
    tl.completed_from[c] = std::min(tl.completed_from[c], t0);
    tl.last_use[c] = std::numeric_limits<std::int64_t>::max();
  }
  for (const auto& [block, path] : master.paths) {
    for (const Action& a : path.actions)
      if (a.kind == ActionKind::Move)
        tl.forced[a.t].push_back(
            {grid.index(a.from), grid.index(a.to), block.kind == BlockKind::Target});
    if (block.kind != BlockKind::Target) continue;
    // Resting occupancy: the committed target sits on its cell up to and
    // including the start of each action step, until it completes.
    int cell = inst.start.target_cells()[block.id];
    int t = 0;
    for (const Action& a : path.actions) {
      for (; t <= a.t; ++t) {
        tl.tgt_at[t][cell] = 1;
        tl.last_use[cell] = std::max(tl.last_use[cell], static_cast<std::int64_t>(t));
      }
      if (a.kind == ActionKind::Move)
        cell = grid.index(a.to);
      else if (a.kind == ActionKind::Complete)
        break;
    }
  }
  return tl;
}

enum class OwnKind : uint8_t { None, TargetMove, Helper, Complete };

struct NodeRec {
  std::vector<uint64_t> occ;  // non-target occupancy at start of step t
  double g = 0.0;
  int t = 0;
  int cell = -1;  // -1 once the target has completed
  int parent = -1;
  OwnKind own = OwnKind::None;
  int from = -1;
  int to = -1;
};

struct OpenEntry {
  double f;
  std::int64_t seq;
  int idx;
  bool operator>(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    return seq > o.seq;
  }
};

inline bool bit(const std::vector<uint64_t>& w, int c) {
  return (w[c >> 6] >> (c & 63)) & 1;
}
inline void set_bit(std::vector<uint64_t>& w, int c) { w[c >> 6] |= 1ULL << (c & 63); }
inline void clear_bit(std::vector<uint64_t>& w, int c) {
  w[c >> 6] &= ~(1ULL << (c & 63));
}

enum class SubStatus { Found, Exhausted, Timeout, NodeCap };

struct SubOutcome {
  SubStatus status = SubStatus::Exhausted;
  std::vector<Action> actions;  // this target's moves/completion + helper moves
  std::int64_t expanded = 0;
};

SubOutcome constrained_search(const Instance& inst, const Timeline& tl, int target_id,
                              const Deadline& deadline) {
  SubOutcome out;
  const GridMap& grid = inst.grid;
  const CostModel& costs = inst.costs;
  const int cells = tl.cells;
  const int words = (cells + 63) / 64;

  std::vector<std::vector<int>> adj(cells);
  std::vector<uint8_t> goal_cell(cells, 0);
  for (int r = 0; r < grid.height(); ++r)
    for (int c = 0; c < grid.width(); ++c) {
      Vertex v{r, c};
      if (!grid.passable(v)) continue;
      for (Vertex n : neighbors(grid, v)) adj[grid.index(v)].push_back(grid.index(n));
    }
  for (Vertex v : inst.goals.goals_for(target_id)) goal_cell[grid.index(v)] = 1;

  // Admissible remaining-cost bound: obstacles-only BFS distance to the
  // nearest goal, one target move per edge, plus the completion itself.
  // Consistent, since only the target's own moves change its cell.
  constexpr int kUnreach = std::numeric_limits<int>::max() / 4;
  std::vector<int> goal_dist(cells, kUnreach);
  {
    std::vector<int> bfs;
    for (int c = 0; c < cells; ++c)
      if (goal_cell[c]) {
        goal_dist[c] = 0;
        bfs.push_back(c);
      }
    for (size_t head = 0; head < bfs.size(); ++head) {
      int u = bfs[head];
      for (int v : adj[u])
        if (goal_dist[v] == kUnreach) {
          goal_dist[v] = goal_dist[u] + 1;
          bfs.push_back(v);
        }
    }
  }
  auto h_of = [&](const NodeRec& n) {
    if (n.own == OwnKind::Complete) return 0.0;
    return goal_dist[n.cell] * costs.move_tgt + costs.complete_tgt;
  };

  const int horizon = tl.t_latest + 1 + 4 * cells;
  const int collapse_t = tl.t_latest + 1;  // beyond this the world is static

  std::vector<uint64_t> occ0(words, 0);
  for (int c : inst.start.nontarget_cells()) set_bit(occ0, c);

  std::vector<NodeRec> nodes;
  std::unordered_map<std::string, int> seen;
  auto key_of = [&](int t, int cell, const std::vector<uint64_t>& occ) {
    std::string k(sizeof(int32_t) * 2 + words * sizeof(uint64_t), '\0');
    int32_t tk = std::min(t, collapse_t);
    int32_t ck = cell;
    std::memcpy(k.data(), &tk, sizeof(tk));
    std::memcpy(k.data() + sizeof(tk), &ck, sizeof(ck));
    std::memcpy(k.data() + 2 * sizeof(int32_t), occ.data(), words * sizeof(uint64_t));
    return k;
  };

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<OpenEntry>> open;
  std::int64_t seq = 0;

  auto push_node = [&](NodeRec&& n) {
    double f = n.g + h_of(n);
    std::string k = key_of(n.t, n.cell, n.occ);
    auto it = seen.find(k);
    if (it == seen.end()) {
      int idx = static_cast<int>(nodes.size());
      nodes.push_back(std::move(n));
      seen.emplace(std::move(k), idx);
      open.push({f, seq++, idx});
    } else if (n.g < nodes[it->second].g) {
      NodeRec& old = nodes[it->second];
      old.g = n.g;
      old.t = n.t;  // same key may collapse distinct real times; keep the cheaper
      old.parent = n.parent;
      old.own = n.own;
      old.from = n.from;
      old.to = n.to;
      open.push({f, seq++, it->second});
    }
  };

  {
    NodeRec root;
    root.occ = occ0;
    root.cell = inst.start.target_cells()[target_id];
    push_node(std::move(root));
  }

  // Start-of-step vacancy for everything I can see at step t.
  auto dest_free = [&](int t, int c, const std::vector<uint64_t>& occ, int my_cell) {
    return tl.completed_from[c] > t && !tl.prior_target_at(t, c) && !bit(occ, c) &&
           c != my_cell;
  };

  // After completing at step tc, the committed future must still be able to
  // execute around the helper arrangement left behind.
  auto future_replay_ok = [&](int tc, std::vector<uint64_t> sim, int done_cell) {
    for (int t = tc + 1; t <= tl.t_latest; ++t) {
      for (const ForcedMove& f : tl.forced_at(t)) {
        if (f.target) {
          if (bit(sim, f.to) || f.to == done_cell) return false;
        } else {
          if (!bit(sim, f.from) || f.to == done_cell) return false;
          if (tl.completed_from[f.to] <= t || tl.prior_target_at(t, f.to) ||
              bit(sim, f.to))
            return false;
          clear_bit(sim, f.from);
          set_bit(sim, f.to);
        }
      }
    }
    return true;
  };

  while (!open.empty()) {
    OpenEntry top = open.top();
    open.pop();
    NodeRec cur = nodes[top.idx];  // copy: nodes may reallocate while pushing
    if (top.f != cur.g + h_of(cur)) continue;  // stale entry
    if (cur.own == OwnKind::Complete) {
      // Cheapest completion reached: emit this target's own actions.
      for (int i = top.idx; nodes[i].parent >= 0; i = nodes[i].parent) {
        const NodeRec& n = nodes[i];
        int t_act = nodes[n.parent].t;
        switch (n.own) {
          case OwnKind::TargetMove:
            out.actions.push_back(Action::move({target_id, BlockKind::Target}, t_act,
                                               grid.vertex(n.from), grid.vertex(n.to)));
            break;
          case OwnKind::Helper:
            out.actions.push_back(Action::move({-1, BlockKind::NonTarget}, t_act,
                                               grid.vertex(n.from), grid.vertex(n.to)));
            break;
          case OwnKind::Complete:
            out.actions.push_back(Action::complete({target_id, BlockKind::Target},
                                                   t_act, grid.vertex(n.from)));
            break;
          case OwnKind::None:
            break;  // idle step; waits are materialized at the end
        }
      }
      std::reverse(out.actions.begin(), out.actions.end());
      out.status = SubStatus::Found;
      return out;
    }
    if (deadline.expired()) {
      out.status = SubStatus::Timeout;
      return out;
    }
    if (++out.expanded > kNodeCap) {
      out.status = SubStatus::NodeCap;
      return out;
    }
    const int t = cur.t;
    if (t >= horizon) continue;

    // Replay legality of every committed move firing this step; all of this
    // node's edges share the post-replay occupancy.
    bool replay_ok = true;
    std::vector<uint64_t> after = cur.occ;
    for (const ForcedMove& f : tl.forced_at(t)) {
      if (f.target) {
        if (bit(cur.occ, f.to) || f.to == cur.cell) {
          replay_ok = false;
          break;
        }
      } else {
        if (!bit(cur.occ, f.from) ||
            !dest_free(t, f.to, cur.occ, cur.cell)) {
          replay_ok = false;
          break;
        }
        clear_bit(after, f.from);
        set_bit(after, f.to);
      }
    }
    if (!replay_ok) continue;  // this branch broke a committed precondition

    // Idle step (only worthwhile while the committed world still changes).
    if (t <= tl.t_latest) {
      NodeRec n;
      n.occ = after;
      n.g = cur.g + costs.wait_tgt;
      n.t = t + 1;
      n.cell = cur.cell;
      n.parent = top.idx;
      push_node(std::move(n));
    }
    // Target moves.
    for (int d : adj[cur.cell]) {
      if (tl.frozen(t, d) || tl.prior_target_at(t, d) || bit(cur.occ, d)) continue;
      NodeRec n;
      n.occ = after;
      n.g = cur.g + costs.move_tgt;
      n.t = t + 1;
      n.cell = d;
      n.parent = top.idx;
      n.own = OwnKind::TargetMove;
      n.from = cur.cell;
      n.to = d;
      push_node(std::move(n));
    }
    // Helper moves (the target idles, so its wait is charged on top).
    for (int w = 0; w < words; ++w) {
      uint64_t bits = cur.occ[w];
      while (bits) {
        int u = (w << 6) + __builtin_ctzll(bits);
        bits &= bits - 1;
        if (tl.frozen(t, u)) continue;  // a committed move uses this block now
        for (int d : adj[u]) {
          if (tl.frozen(t, d) || tl.prior_target_at(t, d) || bit(cur.occ, d) ||
              d == cur.cell)
            continue;
          NodeRec n;
          n.occ = after;
          clear_bit(n.occ, u);
          set_bit(n.occ, d);
          n.g = cur.g + costs.move_non + costs.wait_tgt;
          n.t = t + 1;
          n.cell = cur.cell;
          n.parent = top.idx;
          n.own = OwnKind::Helper;
          n.from = u;
          n.to = d;
          push_node(std::move(n));
        }
      }
    }
    // Completion: legal only when no committed plan ever touches this cell
    // again and the committed future survives the leftover arrangement.
    if (goal_cell[cur.cell] && tl.last_use[cur.cell] < t &&
        future_replay_ok(t, after, cur.cell)) {
      NodeRec n;
      n.occ = after;
      n.g = cur.g + costs.complete_tgt;
      n.t = t + 1;
      n.cell = -1;
      n.parent = top.idx;
      n.own = OwnKind::Complete;
      n.from = cur.cell;
      push_node(std::move(n));
    }
  }
  out.status = SubStatus::Exhausted;
  return out;
}

// Helper moves are planned over anonymous occupancy, so the emitted ids are
// placeholders. Re-simulate the union and name each non-target move after the
// block actually standing on its source cell (non-targets are interchangeable,
// so any consistent naming is equally valid).
Plan resolve_nontarget_identities(const Instance& inst, const Plan& raw) {
  const GridMap& grid = inst.grid;
  std::vector<int> owner(grid.height() * grid.width(), -1);  // encoded occupant
  auto encode = [](BlockId b) { return b.kind == BlockKind::Target ? b.id : -(b.id + 2); };
  auto decode = [](int e) {
    return e >= 0 ? BlockId{e, BlockKind::Target} : BlockId{-e - 2, BlockKind::NonTarget};
  };
  for (int id = 0; id < inst.start.num_targets(); ++id)
    owner[inst.start.target_cells()[id]] = encode({id, BlockKind::Target});
  for (int id = 0; id < inst.start.num_nontargets(); ++id)
    owner[inst.start.nontarget_cells()[id]] = encode({id, BlockKind::NonTarget});

  std::map<int, std::vector<Action>> by_step;
  for (const auto& [block, path] : raw.paths) {
    (void)block;
    for (const Action& a : path.actions) by_step[a.t].push_back(a);
  }
  Plan out;
  for (auto& [t, acts] : by_step) {
    (void)t;
    // Name every action from start-of-step occupancy, then apply the moves.
    for (Action& a : acts) {
      int src = grid.index(a.from);
      if (owner[src] == -1)
        throw Error(ErrorCode::model_error, "union plan references an empty cell", a.t,
                    {{a.from.row, a.from.col}});
      BlockId actual = decode(owner[src]);
      if (a.block.kind == BlockKind::Target) {
        if (actual != a.block)
          throw Error(ErrorCode::model_error, "union plan lost track of a target", a.t,
                      {{a.from.row, a.from.col}});
      } else {
        if (actual.kind != BlockKind::NonTarget)
          throw Error(ErrorCode::model_error, "helper move source holds a target", a.t,
                      {{a.from.row, a.from.col}});
        a.block = actual;
      }
    }
    for (const Action& a : acts)
      if (a.kind == ActionKind::Move) owner[grid.index(a.from)] = -1;
    for (const Action& a : acts)
      if (a.kind == ActionKind::Move) owner[grid.index(a.to)] = encode(a.block);
    for (const Action& a : acts) out.add(a);
  }
  return out;
}

}  // namespace

SolveResult solve_priority(const Instance& inst, double budget_seconds) {
  Deadline deadline(budget_seconds);
  SolveResult r;
  try {
    try {
      h_state(inst.start, inst);  // static reachability of every goal
    } catch (const Error& e) {
      if (e.code == ErrorCode::unreachable_goal) {
        r.status = SolveStatus::Infeasible;
        r.detail = e.what();
        return r;
      }
      throw;
    }
    std::vector<BlockId> order = compute_priority(inst.start, inst);
    Plan master;
    for (BlockId tgt : order) {
      ConstraintSet xi = compute_constraint(master);
      Timeline tl = build_timeline(inst, master, xi);
      SubOutcome sub = constrained_search(inst, tl, tgt.id, deadline);
      r.nodes_expanded += sub.expanded;
      if (sub.status == SubStatus::Timeout) {
        r.status = SolveStatus::Timeout;
        r.detail = "budget exhausted while planning " + to_string(tgt);
        return r;
      }
      if (sub.status != SubStatus::Found) {
        r.status = SolveStatus::Failure;
        r.detail = (sub.status == SubStatus::NodeCap ? "node limit while planning "
                                                     : "no constrained plan for ") +
                   to_string(tgt);
        return r;
      }
      for (const Action& a : sub.actions) master.add(a);
      master = resolve_nontarget_identities(inst, master);
    }
    validate(master, inst);  // the union must execute in parallel as committed
    finish_success(r, inst, std::move(master), deadline.elapsed_ms());
  } catch (const Error& e) {
    r.status = SolveStatus::Failure;
    r.detail = e.what();
  }
  return r;
}

}  // namespace brap
