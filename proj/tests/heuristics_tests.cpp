#include "doctest.h"

#include "brap/heuristics.hpp"
#include "fixtures.hpp"

using namespace brap;

namespace {
const BlockId T0{0, BlockKind::Target};
}

TEST_CASE("least-blocking path on an empty corridor") {
  Instance inst = grid_instance({"T...g"});
  auto lbp = least_blocking_path(inst.start, inst.grid, T0, inst.goals.shared,
                                 default_weights(inst.costs));
  CHECK(lbp.length == 4);
  CHECK(lbp.blocking == 0);
  CHECK(lbp.vertices.front() == Vertex{0, 0});
  CHECK(lbp.vertices.back() == Vertex{0, 4});
}

TEST_CASE("least-blocking path counts blockers it passes through") {
  Instance inst = grid_instance({"T.N.g"});
  auto lbp = least_blocking_path(inst.start, inst.grid, T0, inst.goals.shared,
                                 default_weights(inst.costs));
  CHECK(lbp.length == 4);
  CHECK(lbp.blocking == 1);
}

TEST_CASE("least-blocking path prefers a detour over a blocked straight line") {
  // Straight line passes two non-targets (weight 2+4+4+2 = 12 over 4 edges);
  // the detour through the free row costs 6 edges * 2 = 12 as well, so the
  // tie breaks to fewer edges: the straight line.
  Instance inst = grid_instance({"TNN.g", "....."});
  auto tie = least_blocking_path(inst.start, inst.grid, T0, inst.goals.shared,
                                 default_weights(inst.costs));
  CHECK(tie.length == 4);
  CHECK(tie.blocking == 2);
  // Three blockers tip the balance to the detour.
  Instance inst2 = grid_instance({"TNNNg", "....."});
  auto detour = least_blocking_path(inst2.start, inst2.grid, T0, inst2.goals.shared,
                                    default_weights(inst2.costs));
  CHECK(detour.length == 6);
  CHECK(detour.blocking == 0);
}

TEST_CASE("enclosed target has no path to any goal") {
  Instance inst = grid_instance({"###..", "#T#.g", "###.."});
  CHECK_THROWS_AS(least_blocking_path(inst.start, inst.grid, T0, inst.goals.shared,
                                      default_weights(inst.costs)),
                  Error);
  try {
    h_state(inst.start, inst);
    FAIL("expected unreachable-goal");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::unreachable_goal);
  }
}

TEST_CASE("h_state matches the worked two-target example") {
  // Target 0 must pass one blocker over two edges: (2+1) moves + complete.
  // Target 1 has a clear two-edge path: 2 moves + complete.
  Instance inst = grid_instance({"TNg", "T.g"});
  HState h = h_state(inst.start, inst);
  CHECK(h.per_target[0] == 3 * 2.0 + 2.0);  // 8
  CHECK(h.per_target[1] == 2 * 2.0 + 2.0);  // 6
  CHECK(h.value == doctest::Approx(7.0));   // mean of 8 and 6
  HState hmax = h_state(inst.start, inst, HAggregate::Max);
  CHECK(hmax.value == 8.0);
}

TEST_CASE("h_state trivia: on-goal target, completed targets") {
  Instance on_goal = grid_instance({"t."});
  CHECK(h_state(on_goal.start, on_goal).value == 2.0);

  Instance two = grid_instance({"t.", "t."});
  Configuration cfg = apply_action(two.start, two.grid, two.goals, two.costs,
                                   Action::complete(T0, 0, {0, 0}));
  HState h = h_state(cfg, two);
  CHECK(h.per_target[0] == 0.0);
  CHECK(h.per_target[1] == 2.0);
  CHECK(h.value == doctest::Approx(1.0));  // completed targets still divide

  Configuration done = apply_action(cfg, two.grid, two.goals, two.costs,
                                    Action::complete({1, BlockKind::Target}, 1, {1, 0}));
  CHECK(h_state(done, two).value == 0.0);
}

TEST_CASE("h_state respects cheaper non-target displacement costs") {
  CostModel costs;
  costs.move_non = 0.5;  // blockers clear at the cheaper rate
  Instance inst = grid_instance({"TNg"}, costs);
  HState h = h_state(inst.start, inst);
  CHECK(h.per_target[0] == doctest::Approx(2 * 2.0 + 0.5 + 2.0));
}

TEST_CASE("compute_priority orders by per-target bound, ties by id") {
  // Target 0 is three edges from the goal set, target 1 only two.
  Instance inst = grid_instance({"T..g", "...." , "T.g."});
  auto order = compute_priority(inst.start, inst);
  REQUIRE(order.size() == 2);
  CHECK(order[0].id == 1);
  CHECK(order[1].id == 0);

  Instance tied = grid_instance({"T.g", "T.g"});
  auto tie_order = compute_priority(tied.start, tied);
  CHECK(tie_order[0].id == 0);
  CHECK(tie_order[1].id == 1);

  Instance solo = grid_instance({"T.g"});
  CHECK(compute_priority(solo.start, solo).size() == 1);
}

TEST_CASE("adding a blocker never makes the chosen path cheaper") {
  Instance clear = grid_instance({"T..g", "...."});
  Instance blocked = grid_instance({"TN.g", "...."});
  auto w = default_weights(clear.costs);
  auto p1 = least_blocking_path(clear.start, clear.grid, T0, clear.goals.shared, w);
  auto p2 = least_blocking_path(blocked.start, blocked.grid, T0, blocked.goals.shared, w);
  double w1 = p1.length * w.free_cell +
              p1.blocking * (w.nontarget_cell - w.free_cell);
  double w2 = p2.length * w.free_cell +
              p2.blocking * (w.nontarget_cell - w.free_cell);
  CHECK(w2 >= w1);
}
