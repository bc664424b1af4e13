#include "brap/solver_lacam.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "brap/error.hpp"
#include "brap/heuristics.hpp"

namespace brap {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Upper bound on estimated search bookkeeping (nodes plus constraint trees).
constexpr std::size_t kMemoryBudgetBytes = 512ull << 20;

// Hop distances from `sources`, ignoring blocks; obstacles and completed
// vertices are impassable.
std::vector<int> bfs_ignoring_blocks(const GridMap& grid, const Configuration& cfg,
                                     const std::vector<int>& sources) {
  std::vector<int> dist(grid.size(), kInf);
  std::vector<int> layer, next;
  for (int s : sources)
    if (dist[s] == kInf) {
      dist[s] = 0;
      layer.push_back(s);
    }
  for (int d = 1; !layer.empty(); ++d, layer.swap(next)) {
    next.clear();
    for (int c : layer)
      for (Vertex nv : neighbors(grid, grid.vertex(c))) {
        int n = grid.index(nv);
        if (dist[n] != kInf || cfg.is_completed_vertex(n)) continue;
        dist[n] = d;
        next.push_back(n);
      }
  }
  return dist;
}

// All per-step working state of the one-step generator.
struct StepState {
  const Instance& inst;
  const Configuration& cfg;
  const TempGoals& cur_goals;

  std::vector<int> next_tgt, next_non;  // -1 undecided, else next cell
  std::vector<uint8_t> complete_now;    // per target id
  std::vector<uint8_t> claimed;         // per cell: some block's next position
  int free_unclaimed = 0;               // empty-at-start cells not yet claimed
  std::vector<int> dist_empty;          // hops to the nearest empty cell
  TempGoals next_goals;
  std::vector<uint8_t> goal_taken;      // per cell: claimed temp goal / completion
  std::map<int, std::vector<int>> goal_dist;  // temp-goal cell -> distance field

  explicit StepState(const Configuration& c, const Instance& i, const TempGoals& g)
      : inst(i),
        cfg(c),
        cur_goals(g),
        next_tgt(c.num_targets(), -1),
        next_non(c.num_nontargets(), -1),
        complete_now(c.num_targets(), 0),
        claimed(i.grid.size(), 0),
        goal_taken(i.grid.size(), 0) {
    std::vector<int> empties;
    for (int cell = 0; cell < i.grid.size(); ++cell)
      if (c.is_free(cell)) empties.push_back(cell);
    free_unclaimed = static_cast<int>(empties.size());
    dist_empty = bfs_ignoring_blocks(i.grid, c, empties);
  }

  int& next_of(BlockId b) {
    return b.kind == BlockKind::Target ? next_tgt[b.id] : next_non[b.id];
  }
  bool decided(BlockId b) { return next_of(b) >= 0; }
  int cell_of(BlockId b) const { return inst.grid.index(*cfg.position(b)); }

  void claim(int cell) {
    if (cfg.is_free(cell) && !claimed[cell]) --free_unclaimed;
    claimed[cell] = 1;
  }
  void unclaim_own(int cell) { claimed[cell] = 0; }  // occupied cells only

  const std::vector<int>& dist_to(int goal_cell) {
    auto it = goal_dist.find(goal_cell);
    if (it == goal_dist.end())
      it = goal_dist.emplace(goal_cell,
                             bfs_ignoring_blocks(inst.grid, cfg, {goal_cell})).first;
    return it->second;
  }

  // Claims the nearest available goal vertex for target `id`, preferring the
  // still-valid previous assignment; leaves the target goalless when every
  // goal vertex is completed, claimed, or unreachable.
  void assign_temp_goal(int id) {
    int pos = next_tgt[id] >= 0 ? next_tgt[id] : cell_of({id, BlockKind::Target});
    auto available = [&](const Vertex& v) {
      int c = inst.grid.index(v);
      return !cfg.is_completed_vertex(c) && !goal_taken[c];
    };
    if (auto prev = cur_goals.get(id); prev && available(*prev)) {
      next_goals.assigned[id] = *prev;
      goal_taken[inst.grid.index(*prev)] = 1;
      return;
    }
    std::vector<int> from = bfs_ignoring_blocks(inst.grid, cfg, {pos});
    int best = -1, best_d = kInf;
    for (const Vertex& v : inst.goals.goals_for(id)) {
      int c = inst.grid.index(v);
      if (!available(v) || from[c] >= kInf) continue;
      if (from[c] < best_d || (from[c] == best_d && c < best)) {
        best = c;
        best_d = from[c];
      }
    }
    if (best >= 0) {
      next_goals.assigned[id] = inst.grid.vertex(best);
      goal_taken[best] = 1;
    }
  }

  // The recursive push chain. Returns true when `b` is resolved: it moved
  // into an empty vertex, deliberately waited, or handed its request to the
  // block in its way. `pushed` blocks may not settle for waiting.
  bool pibt(bool pushed, BlockId b) {
    int pos = cell_of(b);
    next_of(b) = pos;  // default wait; also marks b as processed
    claim(pos);
    std::optional<Vertex> temp;
    if (b.kind == BlockKind::Target) {
      assign_temp_goal(b.id);
      temp = next_goals.get(b.id);
    }
    if (free_unclaimed == 0) return true;

    std::vector<int> cand{pos};
    for (Vertex nv : neighbors(inst.grid, inst.grid.vertex(pos))) {
      int n = inst.grid.index(nv);
      if (!cfg.is_completed_vertex(n)) cand.push_back(n);
    }
    const std::vector<int>* to_goal = temp ? &dist_to(inst.grid.index(*temp)) : nullptr;
    auto pref = [&](int u) {
      return to_goal ? std::make_tuple((*to_goal)[u], dist_empty[u], u)
                     : std::make_tuple(dist_empty[u], 0, u);
    };
    std::sort(cand.begin(), cand.end(),
              [&](int a, int c) { return pref(a) < pref(c); });

    for (int u : cand) {
      if (u == pos) {
        if (pushed) continue;
        return true;  // waiting is the preferred choice
      }
      if (claimed[u]) continue;
      std::optional<BlockId> j = cfg.occupant(u);
      if (j) {
        if (decided(*j) || !pibt(true, *j)) continue;
        return true;  // the blocker got out of the way; b waits this step
      }
      unclaim_own(pos);  // u was empty at step start: move there
      next_of(b) = u;
      claim(u);
      return true;
    }
    return false;
  }
};

}  // namespace

PibtStep brap_pibt_step(const Configuration& cfg, const Instance& inst,
                        const PriorityTable& omega, const TempGoals& goals,
                        const std::vector<LowLevelConstraint>& forced) {
  const GridMap& grid = inst.grid;
  int nT = cfg.num_targets();
  StepState st(cfg, inst, goals);

  // Priorities first: reset on a reached temporary goal, otherwise escalate.
  PriorityTable w = omega;
  for (int id = 0; id < nT; ++id) {
    if (cfg.target_completed(id)) {
      w.value.erase(id);
      continue;
    }
    auto g = goals.get(id);
    if (g && *cfg.position({id, BlockKind::Target}) == *g)
      w.value[id] = static_cast<double>(id) / (nT + 1);
    else
      w.value[id] += 1.0;
  }

  // Forced decisions are pre-committed before anything else may claim cells.
  for (const LowLevelConstraint& c : forced) {
    auto pos = cfg.position(c.who);
    if (!pos)
      throw Error(ErrorCode::parameter_error, "constraint on a completed block");
    int pc = grid.index(*pos), wc = grid.index(c.where);
    if (st.decided(c.who) || st.claimed[wc])
      throw Error(ErrorCode::constraint_conflict, "forced decisions collide", -1,
                  {{c.where.row, c.where.col}});
    if (c.complete) {
      if (c.who.kind != BlockKind::Target || c.where != *pos)
        throw Error(ErrorCode::parameter_error, "completion forced off-vertex");
      const auto gs = inst.goals.goals_for(c.who.id);
      if (std::find(gs.begin(), gs.end(), *pos) == gs.end())
        throw Error(ErrorCode::parameter_error, "completion forced off-goal");
      st.complete_now[c.who.id] = 1;
      st.next_tgt[c.who.id] = pc;
      st.claim(pc);
      st.goal_taken[pc] = 1;
    } else if (c.where == *pos) {
      st.next_of(c.who) = pc;
      st.claim(pc);
    } else {
      bool adjacent = false;
      for (Vertex nv : neighbors(grid, *pos)) adjacent |= nv == c.where;
      if (!adjacent || !cfg.is_free(wc))
        throw Error(ErrorCode::constraint_conflict,
                    "forced move is not into an adjacent empty vertex", -1,
                    {{c.where.row, c.where.col}});
      st.next_of(c.who) = wc;
      st.claim(wc);
    }
    if (c.who.kind == BlockKind::Target && !st.complete_now[c.who.id])
      if (auto g = goals.get(c.who.id); g && !st.goal_taken[grid.index(*g)] &&
                                        !cfg.is_completed_vertex(grid.index(*g))) {
        st.next_goals.assigned[c.who.id] = *g;
        st.goal_taken[grid.index(*g)] = 1;
      }
  }

  // Targets standing on their temporary goal complete automatically.
  for (int id = 0; id < nT; ++id) {
    if (cfg.target_completed(id) || st.decided({id, BlockKind::Target})) continue;
    auto g = goals.get(id);
    if (!g) continue;
    Vertex pos = *cfg.position({id, BlockKind::Target});
    if (pos == *g) {
      st.complete_now[id] = 1;
      st.next_tgt[id] = grid.index(pos);
      st.claim(grid.index(pos));
      st.goal_taken[grid.index(pos)] = 1;
    }
  }

  // Remaining targets call for empty cells in descending priority.
  std::vector<int> order;
  for (int id = 0; id < nT; ++id)
    if (!cfg.target_completed(id)) order.push_back(id);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double wa = w.value.at(a), wb = w.value.at(b);
    return wa != wb ? wa > wb : a < b;
  });
  for (int id : order)
    if (!st.decided({id, BlockKind::Target})) st.pibt(false, {id, BlockKind::Target});

  // Materialize the step; undecided blocks stay where they are.
  Configuration out = cfg;
  for (int id = 0; id < nT; ++id) {
    if (cfg.target_completed(id) || st.next_tgt[id] < 0 || st.complete_now[id]) continue;
    Vertex from = *cfg.position({id, BlockKind::Target});
    Vertex to = grid.vertex(st.next_tgt[id]);
    if (from != to) out.move_block(grid, {id, BlockKind::Target}, from, to);
  }
  for (int id = 0; id < cfg.num_nontargets(); ++id) {
    if (st.next_non[id] < 0) continue;
    Vertex from = *cfg.position({id, BlockKind::NonTarget});
    Vertex to = grid.vertex(st.next_non[id]);
    if (from != to) out.move_block(grid, {id, BlockKind::NonTarget}, from, to);
  }
  for (int id = 0; id < nT; ++id)
    if (st.complete_now[id]) {
      out.complete_target(grid, id, *cfg.position({id, BlockKind::Target}));
      st.next_goals.assigned.erase(id);
      w.value.erase(id);
    }
  out.time = cfg.time + 1;
  return {std::move(out), std::move(st.next_goals), std::move(w)};
}

namespace {

std::string config_key(const Configuration& cfg) {
  std::string key;
  const auto& tgt = cfg.target_cells();
  std::vector<int> non = cfg.nontarget_cells();  // interchangeable: sort
  std::sort(non.begin(), non.end());
  key.reserve((tgt.size() + non.size()) * sizeof(int) + cfg.completed_cells().size() / 8 + 1);
  auto append = [&key](const std::vector<int>& v) {
    key.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(int));
  };
  append(tgt);
  append(non);
  const auto& comp = cfg.completed_cells();
  for (size_t i = 0; i < comp.size(); i += 8) {
    char byte = 0;
    for (size_t b = 0; b < 8 && i + b < comp.size(); ++b)
      byte = static_cast<char>(byte | (comp[i + b] ? 1 : 0) << b);
    key.push_back(byte);
  }
  return key;
}

// Composite cost of one synchronous transition under the Table-1 accounting
// that plan extraction later reproduces: uncompleted targets pay for a move,
// a completion, or an idle step; non-targets pay only when they move.
double transition_cost(const Configuration& a, const Configuration& b,
                       const CostModel& costs) {
  double total = 0.0;
  for (int id = 0; id < a.num_targets(); ++id) {
    if (a.target_completed(id)) continue;
    if (b.target_completed(id))
      total += costs.complete_tgt;
    else if (*a.position({id, BlockKind::Target}) != *b.position({id, BlockKind::Target}))
      total += costs.move_tgt;
    else
      total += costs.wait_tgt;
  }
  for (int id = 0; id < a.num_nontargets(); ++id)
    if (*a.position({id, BlockKind::NonTarget}) != *b.position({id, BlockKind::NonTarget}))
      total += costs.move_non;
  return total;
}

struct HighNode {
  Configuration config;
  PriorityTable priorities;
  TempGoals temp_goals;
  double g = 0.0;
  double h = 0.0;
  int parent = -1;
  std::vector<BlockId> movable;  // blocks adjacent to an empty vertex
  std::deque<std::vector<LowLevelConstraint>> tree;  // pending constraint sets
};

// Blocks whose next step is worth constraining: anything adjacent to an
// empty vertex can move, and a target standing on one of its goals can
// complete (or deliberately hold off) even with no empty neighbour.
std::vector<BlockId> movable_blocks(const Configuration& cfg, const Instance& inst) {
  const GridMap& grid = inst.grid;
  std::vector<BlockId> out;
  auto adjacent_empty = [&](Vertex v) {
    for (Vertex n : neighbors(grid, v))
      if (cfg.is_free(grid.index(n))) return true;
    return false;
  };
  for (int id = 0; id < cfg.num_targets(); ++id) {
    if (cfg.target_completed(id)) continue;
    Vertex pos = *cfg.position({id, BlockKind::Target});
    const auto gs = inst.goals.goals_for(id);
    if (adjacent_empty(pos) || std::find(gs.begin(), gs.end(), pos) != gs.end())
      out.push_back({id, BlockKind::Target});
  }
  for (int id = 0; id < cfg.num_nontargets(); ++id)
    if (adjacent_empty(*cfg.position({id, BlockKind::NonTarget})))
      out.push_back({id, BlockKind::NonTarget});
  return out;
}

// Options for one movable block: its empty neighbors in row-major order,
// stay, and complete-in-place for a target standing on one of its goals.
std::vector<LowLevelConstraint> block_options(const Configuration& cfg,
                                              const Instance& inst, BlockId b) {
  std::vector<LowLevelConstraint> out;
  Vertex pos = *cfg.position(b);
  std::vector<int> empties;
  for (Vertex n : neighbors(inst.grid, pos))
    if (cfg.is_free(inst.grid.index(n))) empties.push_back(inst.grid.index(n));
  std::sort(empties.begin(), empties.end());
  for (int c : empties) out.push_back({b, inst.grid.vertex(c), false});
  out.push_back({b, pos, false});  // stay
  if (b.kind == BlockKind::Target) {
    const auto gs = inst.goals.goals_for(b.id);
    if (std::find(gs.begin(), gs.end(), pos) != gs.end())
      out.push_back({b, pos, true});
  }
  return out;
}

double safe_h(const Configuration& cfg, const Instance& inst) {
  try {
    return h_state(cfg, inst).value;
  } catch (const Error& e) {
    if (e.code == ErrorCode::unreachable_goal)
      return std::numeric_limits<double>::infinity();  // sealed: dead branch
    throw;
  }
}

Plan extract_plan(const std::deque<HighNode>& nodes, int leaf) {
  std::vector<int> chain;
  for (int i = leaf; i >= 0; i = nodes[i].parent) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());
  Plan plan;
  for (size_t s = 0; s + 1 < chain.size(); ++s) {
    const Configuration& a = nodes[chain[s]].config;
    const Configuration& b = nodes[chain[s + 1]].config;
    int t = static_cast<int>(s);
    for (int id = 0; id < a.num_targets(); ++id) {
      if (a.target_completed(id)) continue;
      BlockId blk{id, BlockKind::Target};
      Vertex from = *a.position(blk);
      if (b.target_completed(id))
        plan.add(Action::complete(blk, t, from));
      else if (*b.position(blk) != from)
        plan.add(Action::move(blk, t, from, *b.position(blk)));
    }
    for (int id = 0; id < a.num_nontargets(); ++id) {
      BlockId blk{id, BlockKind::NonTarget};
      Vertex from = *a.position(blk);
      if (*b.position(blk) != from) plan.add(Action::move(blk, t, from, *b.position(blk)));
    }
  }
  return plan;
}

}  // namespace

SolveResult lacam_solve(const Instance& inst, double budget_seconds,
                        bool stop_at_first) {
  Deadline deadline(budget_seconds);
  SolveResult r;
  int nT = inst.num_targets();

  double h0 = safe_h(inst.start, inst);
  if (std::isinf(h0)) {
    r.status = SolveStatus::Infeasible;
    r.detail = "a target cannot reach any goal vertex";
    return r;
  }
  PriorityTable w0;
  {
    std::vector<BlockId> ranked = compute_priority(inst.start, inst);
    for (size_t k = 0; k < ranked.size(); ++k)
      w0.value[ranked[k].id] = 1.0 + static_cast<double>(nT - static_cast<int>(k)) / (nT + 1);
  }

  std::deque<HighNode> nodes;
  nodes.push_back({inst.start, w0, TempGoals{}, 0.0, h0, -1,
                   movable_blocks(inst.start, inst), {{}}});
  std::unordered_map<std::string, int> explored;
  explored.emplace(config_key(inst.start), 0);
  std::vector<int> open{0};

  // Deterministic memory budget. Node and constraint-set footprints are
  // estimated from the instance dimensions and tracked as the search grows
  // and sheds them; exceeding the budget ends refinement (or, before the
  // first solution, reports Timeout). Counting instead of sampling process
  // RSS keeps results machine-independent.
  const std::size_t n_cells = static_cast<std::size_t>(inst.grid.size());
  const std::size_t blocks =
      static_cast<std::size_t>(inst.start.num_targets() + inst.start.num_nontargets());
  const std::size_t node_bytes = 5 * n_cells + 4 * blocks         // configuration
                                 + 96 * static_cast<std::size_t>(nT)  // maps
                                 + 8 * blocks                     // movable list
                                 + 4 * blocks + n_cells + 50      // explored key
                                 + 160;                           // struct overhead
  auto tree_entry_bytes = [](std::size_t len) { return 24 * len + 48; };
  std::size_t est_bytes = node_bytes;
  bool out_of_memory = false;

  Plan best_plan;
  double best_cost = std::numeric_limits<double>::infinity();
  double first_cost = 0.0, first_time_ms = 0.0;
  bool have_solution = false;

  // Frees a fully-processed node's expansion state; its configuration must
  // stay for plan extraction through parent links.
  auto retire = [&](HighNode& n) {
    for (const auto& entry : n.tree) est_bytes -= tree_entry_bytes(entry.size());
    n.tree.clear();
    n.movable.clear();
    n.movable.shrink_to_fit();
  };

  while (!open.empty() && !deadline.expired()) {
    if (est_bytes > kMemoryBudgetBytes) {
      out_of_memory = true;
      break;
    }
    int ni = open.back();
    HighNode& n = nodes[ni];
    if (n.config.num_uncompleted() == 0) {
      if (n.g < best_cost) {
        best_plan = extract_plan(nodes, ni);
        best_cost = n.g;
        if (!have_solution) {
          first_cost = n.g;
          first_time_ms = deadline.elapsed_ms();
          have_solution = true;
        }
        if (stop_at_first) break;
      }
      retire(n);
      open.pop_back();
      continue;
    }
    if ((have_solution && n.g + n.h > best_cost) || n.tree.empty()) {
      retire(n);
      open.pop_back();
      continue;
    }

    std::vector<LowLevelConstraint> cons = std::move(n.tree.front());
    n.tree.pop_front();
    est_bytes -= tree_entry_bytes(cons.size());
    if (cons.size() < n.movable.size()) {
      for (LowLevelConstraint& opt : block_options(n.config, inst, n.movable[cons.size()])) {
        std::vector<LowLevelConstraint> child = cons;
        child.push_back(opt);
        est_bytes += tree_entry_bytes(child.size());
        n.tree.push_back(std::move(child));
      }
    }
    {
      // Two forced moves into one vertex can never generate a legal step.
      std::vector<int> dests;
      for (const LowLevelConstraint& c : cons)
        if (!c.complete && c.where != *n.config.position(c.who))
          dests.push_back(inst.grid.index(c.where));
      std::sort(dests.begin(), dests.end());
      if (std::adjacent_find(dests.begin(), dests.end()) != dests.end()) continue;
    }

    PibtStep step;
    try {
      step = brap_pibt_step(n.config, inst, n.priorities, n.temp_goals, cons);
    } catch (const Error& e) {
      if (e.code == ErrorCode::constraint_conflict) continue;
      throw;
    }
    ++r.nodes_expanded;
    std::string key = config_key(step.config);
    if (explored.count(key)) continue;

    double g2 = nodes[ni].g + transition_cost(nodes[ni].config, step.config, inst.costs);
    double h2 = safe_h(step.config, inst);
    if (std::isinf(h2)) {
      explored.emplace(std::move(key), -1);  // sealed; never revisit
      continue;
    }
    int idx = static_cast<int>(nodes.size());
    nodes.push_back({std::move(step.config), std::move(step.priorities),
                     std::move(step.temp_goals), g2, h2, ni, {}, {{}}});
    nodes[idx].movable = movable_blocks(nodes[idx].config, inst);
    explored.emplace(std::move(key), idx);
    open.push_back(idx);
    est_bytes += node_bytes;
  }

  if (have_solution) {
    validate(best_plan, inst);
    r.first_cost = first_cost;
    finish_success(r, inst, std::move(best_plan), first_time_ms);
    return r;
  }
  if (deadline.expired() || out_of_memory) {
    r.status = SolveStatus::Timeout;
    r.detail = out_of_memory ? "memory budget exhausted before the first solution"
                             : "budget exhausted before the first solution";
  } else {
    r.status = SolveStatus::Infeasible;
    r.detail = "configuration space exhausted";
  }
  return r;
}

}  // namespace brap
