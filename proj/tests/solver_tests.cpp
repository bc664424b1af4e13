#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "brap/heuristics.hpp"
#include "brap/oracle.hpp"
#include "brap/rng.hpp"
#include "brap/solver_config.hpp"
#include "brap/solver_priority.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace brap;

namespace {

// Result fields must agree with the plan they describe.
void check_result_consistency(const Instance& inst, const SolveResult& r) {
  REQUIRE(r.success());
  CHECK_NOTHROW(validate(r.plan, inst));
  Metrics m = metrics(r.plan, inst.costs);
  CHECK(r.composite_cost == doctest::Approx(m.composite_cost));
  CHECK(r.final_cost == doctest::Approx(m.composite_cost));
  CHECK(r.makespan == doctest::Approx(m.makespan));
}

Instance two_block_handoff() {
  // 1x5 corridor [., ., T0, T1, .]; the front block slides right one cell and
  // completes, the back one takes over its vacated cell.
  Instance inst;
  inst.grid = GridMap(1, 5, {});
  inst.start = Configuration(inst.grid, {{0, 2}, {0, 3}}, {});
  inst.goals.per_target = true;
  inst.goals.by_target[0] = {{0, 3}};
  inst.goals.by_target[1] = {{0, 4}};
  inst.label = "handoff";
  return inst;
}

Instance ordering_trap() {
  // 2x4 open grid; T1's goal is T0's start cell. Solvable, but T1 ranks
  // strictly higher (6 vs 8) and marches onto T0's cell at t=0, before T0
  // was ever asked to move; T0 then has no constrained plan.
  Instance inst;
  inst.grid = GridMap(2, 4, {});
  inst.start = Configuration(inst.grid, {{0, 0}, {1, 0}}, {});
  inst.goals.per_target = true;
  inst.goals.by_target[0] = {{0, 3}};
  inst.goals.by_target[1] = {{0, 0}};
  inst.label = "ordering-trap";
  return inst;
}

Instance random_instance(Rng& rng, int h, int w, int n_tgt, int n_non, int n_goals) {
  std::vector<Vertex> cells;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) cells.push_back({r, c});
  std::vector<Vertex> blocks = rng.sample(cells, n_tgt + n_non);
  Instance inst;
  inst.grid = GridMap(h, w, {});
  inst.start = Configuration(
      inst.grid, {blocks.begin(), blocks.begin() + n_tgt},
      {blocks.begin() + n_tgt, blocks.end()});
  inst.goals.shared = rng.sample(cells, n_goals);  // may coincide with blocks
  inst.label = "random";
  return inst;
}

// Same instance with one target removed; later target ids shift down by one.
Instance remove_target(const Instance& inst, int victim_id) {
  Instance out;
  out.grid = inst.grid;
  std::vector<Vertex> targets, nontargets;
  for (int id = 0; id < inst.num_targets(); ++id)
    if (id != victim_id) targets.push_back(*inst.start.position({id, BlockKind::Target}));
  for (int id = 0; id < inst.num_nontargets(); ++id)
    nontargets.push_back(*inst.start.position({id, BlockKind::NonTarget}));
  out.start = Configuration(out.grid, targets, nontargets);
  out.goals = inst.goals;
  if (inst.goals.per_target) {
    out.goals.by_target.clear();
    for (const auto& [id, gs] : inst.goals.by_target)
      if (id != victim_id) out.goals.by_target[id > victim_id ? id - 1 : id] = gs;
  }
  out.costs = inst.costs;
  out.label = inst.label;
  return out;
}

}  // namespace

TEST_CASE("joint-space search matches hand-derived optima") {
  struct Case {
    std::vector<std::string> rows;
    double cost;
  };
  const std::vector<Case> cases = {
      {{"T..g"}, 8.0},          // three moves + completion
      {{"Tg"}, 4.0},            // one move + completion
      {{"t"}, 2.0},             // starts on its goal
      {{"T.g", "T.g"}, 15.0},   // serial execution charges the idle target
      {{"TN.g", "N..."}, 11.0}, // one blocker detours down
      {{"T.N.g", "....."}, 13.0},
  };
  for (const Case& c : cases) {
    CAPTURE(c.rows.front());
    Instance inst = grid_instance(c.rows);
    SolveResult r = solve_astar(inst, 30.0);
    check_result_consistency(inst, r);
    CHECK(r.composite_cost == doctest::Approx(c.cost));
  }
}

TEST_CASE("joint-space search agrees with the exhaustive oracle") {
  const std::vector<std::vector<std::string>> cases = {
      {"T..g"}, {"TN.g", "N..."}, {"TN.g", "...."}, {"T.g", "T.g"},
      {"Tg.", ".N."}, {"tN", "N."},
  };
  for (const auto& rows : cases) {
    CAPTURE(rows.front());
    Instance inst = grid_instance(rows);
    OracleResult o = oracle_solve(inst);
    SolveResult r = solve_astar(inst, 30.0);
    REQUIRE_FALSE(o.infeasible());
    check_result_consistency(inst, r);
    CHECK(r.composite_cost == doctest::Approx(*o.optimal_cost));
  }
}

TEST_CASE("joint-space search proves infeasibility") {
  for (const auto& rows :
       std::vector<std::vector<std::string>>{{"T#g"}, {"TNg"}, {"T.N.g"}}) {
    CAPTURE(rows.front());
    Instance inst = grid_instance(rows);
    OracleResult o = oracle_solve(inst);
    SolveResult r = solve_astar(inst, 30.0);
    CHECK(o.infeasible());
    CHECK(r.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("joint-space search honors the budget") {
  Instance inst = grid_instance({"TN.g", "N..."});
  SolveResult r = solve_astar(inst, 1e-9);
  CHECK(r.status == SolveStatus::Timeout);
}

TEST_CASE("constraints extracted from a committed plan") {
  SUBCASE("empty plan") { CHECK(compute_constraint({}).empty()); }

  SUBCASE("a move pins its source and reserves its destination") {
    Plan p;
    Vertex u{0, 1}, v{0, 2};
    p.add(Action::move({4, BlockKind::Target}, 3, u, v));
    ConstraintSet xi = compute_constraint(p);
    REQUIRE(xi.occupied_at.count({u, 3}) == 1);
    CHECK(xi.occupied_at.at({u, 3}) == BlockId{4, BlockKind::Target});
    CHECK(xi.must_be_free.count({v, 3}) == 1);
    CHECK(xi.is_frozen(u, 3));
    CHECK(xi.is_frozen(v, 3));
    CHECK_FALSE(xi.is_frozen(u, 2));
    // A reserved destination is never simultaneously required occupied.
    for (const auto& [key, id] : xi.occupied_at) {
      (void)id;
      CHECK(xi.must_be_free.count(key) == 0);
    }
  }

  SUBCASE("a wait freezes its vertex for that step only") {
    Plan p;
    p.add(Action::wait({0, BlockKind::Target}, 2, {1, 1}));
    ConstraintSet xi = compute_constraint(p);
    CHECK(xi.is_frozen({1, 1}, 2));
    CHECK_FALSE(xi.is_frozen({1, 1}, 1));
    CHECK_FALSE(xi.is_frozen({1, 1}, 3));
  }

  SUBCASE("a completion freezes its vertex forever onward") {
    Plan p;
    p.add(Action::complete({1, BlockKind::Target}, 5, {0, 0}));
    ConstraintSet xi = compute_constraint(p);
    CHECK_FALSE(xi.is_frozen({0, 0}, 4));
    CHECK(xi.is_frozen({0, 0}, 5));
    CHECK(xi.is_frozen({0, 0}, 500000));
  }
}

TEST_CASE("priority solver matches the optimum on single-target corridors") {
  Instance inst = grid_instance({"T..g"});
  SolveResult r = solve_priority(inst, 30.0);
  check_result_consistency(inst, r);
  CHECK(r.composite_cost == doctest::Approx(8.0));

  Instance on_goal = grid_instance({"t"});
  SolveResult r2 = solve_priority(on_goal, 30.0);
  check_result_consistency(on_goal, r2);
  CHECK(r2.composite_cost == doctest::Approx(2.0));
}

TEST_CASE("priority plans run in parallel instead of serializing") {
  Instance inst = grid_instance({"T.g", "T.g"});
  SolveResult r = solve_priority(inst, 30.0);
  check_result_consistency(inst, r);
  // Two independent corridors: each block pays 2 moves + completion and
  // nobody idles, unlike the one-action-per-step joint search (cost 15).
  CHECK(r.composite_cost == doctest::Approx(12.0));
  CHECK(r.makespan == doctest::Approx(6.0));
  CHECK(plan_horizon(r.plan) == 3);
  int at_t0 = 0;
  for (const auto& [block, path] : r.plan.paths) {
    (void)block;
    for (const Action& a : path.actions)
      if (a.t == 0) ++at_t0;
  }
  CHECK(at_t0 == 2);  // both corridors start moving simultaneously
  SolveResult serial = solve_astar(inst, 30.0);
  CHECK(serial.composite_cost == doctest::Approx(15.0));
}

TEST_CASE("a blocked lower-priority target waits out the freeze") {
  Instance inst = two_block_handoff();
  SolveResult r = solve_priority(inst, 30.0);
  check_result_consistency(inst, r);
  // T1 (closest to its goal) moves first: 2+2. T0 must idle one step while
  // T1's move source stays pinned, then follows: 1+2+2.
  CHECK(r.composite_cost == doctest::Approx(9.0));
  CHECK(r.makespan == doctest::Approx(5.0));
  const Path& back = r.plan.paths.at({0, BlockKind::Target});
  REQUIRE_FALSE(back.actions.empty());
  CHECK(back.actions.front().kind == ActionKind::Wait);
  CHECK(back.actions.front().t == 0);
  CHECK(back.actions.front().from == Vertex{0, 2});
}

TEST_CASE("priority order can doom a solvable instance") {
  Instance inst = ordering_trap();
  SolveResult joint = solve_astar(inst, 30.0);
  REQUIRE(joint.success());  // the instance itself is solvable
  SolveResult r = solve_priority(inst, 30.0);
  CHECK(r.status == SolveStatus::Failure);
  CHECK(r.detail.find("T0") != std::string::npos);
}

TEST_CASE("priority solver reports infeasible goals and budget expiry") {
  Instance sealed = grid_instance({"T#g"});
  CHECK(solve_priority(sealed, 30.0).status == SolveStatus::Infeasible);

  Instance inst = grid_instance({"TN.g", "N..."});
  SolveResult r = solve_priority(inst, 1e-9);
  CHECK(r.status == SolveStatus::Timeout);
}

TEST_CASE("priority plans validate on random instances") {
  Rng rng(20260814);
  int successes = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int h = 2 + rng.below_int(3), w = 2 + rng.below_int(4);
    int cells = h * w;
    int n_tgt = 1 + rng.below_int(2);
    int n_non = rng.below_int(std::max(1, cells / 3));
    if (n_tgt + n_non >= cells) continue;
    Instance inst =
        random_instance(rng, h, w, n_tgt, n_non, n_tgt + rng.below_int(2));
    SolveResult r = solve_priority(inst, 5.0);
    if (!r.success()) continue;
    ++successes;
    check_result_consistency(inst, r);
  }
  CHECK(successes >= 20);
}

TEST_CASE("earlier plans ignore lower-priority targets entirely") {
  // Deleting the lowest-ranked target must leave every other plan untouched,
  // provided the deletion does not reshuffle the remaining priorities (the
  // ranking heuristic sees all blocks, so ties can shift).
  Rng rng(99173);
  int compared = 0;
  for (int trial = 0; trial < 80 && compared < 12; ++trial) {
    int h = 2 + rng.below_int(2), w = 3 + rng.below_int(2);
    int cells = h * w;
    int n_tgt = 2 + rng.below_int(2);
    int n_non = rng.below_int(3);
    if (n_tgt + n_non >= cells) continue;
    Instance inst = random_instance(rng, h, w, n_tgt, n_non, n_tgt);
    std::vector<BlockId> order = compute_priority(inst.start, inst);
    int victim = order.back().id;
    Instance reduced = remove_target(inst, victim);
    auto map_id = [&](int id) { return id > victim ? id - 1 : id; };

    std::vector<int> kept_order, reduced_order;
    for (BlockId b : order)
      if (b.id != victim) kept_order.push_back(map_id(b.id));
    for (BlockId b : compute_priority(reduced.start, reduced))
      reduced_order.push_back(b.id);
    if (kept_order != reduced_order) continue;  // ranking itself changed

    SolveResult full = solve_priority(inst, 5.0);
    SolveResult part = solve_priority(reduced, 5.0);
    if (!full.success() || !part.success()) continue;
    ++compared;
    for (int id : kept_order) {
      int orig = id >= victim ? id + 1 : id;  // undo the shift
      const Path& a = full.plan.paths.at({orig, BlockKind::Target});
      const Path& b = part.plan.paths.at({id, BlockKind::Target});
      REQUIRE(a.actions.size() == b.actions.size());
      for (size_t k = 0; k < a.actions.size(); ++k) {
        CHECK(a.actions[k].kind == b.actions[k].kind);
        CHECK(a.actions[k].t == b.actions[k].t);
        CHECK(a.actions[k].from == b.actions[k].from);
        CHECK(a.actions[k].to == b.actions[k].to);
      }
    }
    // Helper traffic committed by the kept ranks is reproduced verbatim.
    std::multiset<std::tuple<int, int, int, int, int>> full_moves, part_moves;
    for (const auto& [block, path] : part.plan.paths)
      if (block.kind == BlockKind::NonTarget)
        for (const Action& a : path.actions)
          part_moves.insert({a.t, a.from.row, a.from.col, a.to.row, a.to.col});
    for (const auto& [block, path] : full.plan.paths)
      if (block.kind == BlockKind::NonTarget)
        for (const Action& a : path.actions)
          full_moves.insert({a.t, a.from.row, a.from.col, a.to.row, a.to.col});
    for (const auto& mv : part_moves) CHECK(full_moves.count(mv) >= 1);
  }
  CHECK(compared >= 12);
}

TEST_CASE("priority solver agrees with the oracle when a single target moves") {
  // With one target the constrained search degenerates to the full problem.
  Rng rng(555);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 15; ++trial) {
    int h = 1 + rng.below_int(3), w = 2 + rng.below_int(3);
    int cells = h * w;
    int n_non = rng.below_int(std::max(1, cells / 3));
    if (1 + n_non >= cells) continue;
    Instance inst = random_instance(rng, h, w, 1, n_non, 1);
    OracleResult o = oracle_solve(inst, 500'000);
    if (o.infeasible() || !o.optimal_cost) continue;
    SolveResult r = solve_priority(inst, 10.0);
    REQUIRE(r.success());
    check_result_consistency(inst, r);
    CHECK(r.composite_cost == doctest::Approx(*o.optimal_cost));
    ++checked;
  }
  CHECK(checked >= 15);
}
