#include "doctest.h"

#include <algorithm>

#include "brap/model.hpp"
#include "brap/rng.hpp"
#include "fixtures.hpp"

using namespace brap;

TEST_CASE("grid map indexing and obstacles") {
  GridMap g(3, 4, {{1, 1}, {2, 3}});
  CHECK(g.size() == 12);
  CHECK(g.index({2, 3}) == 11);
  CHECK(g.vertex(11) == Vertex{2, 3});
  CHECK(g.is_obstacle({1, 1}));
  CHECK(!g.passable({1, 1}));
  CHECK(!g.passable({3, 0}));
  CHECK(g.passable({0, 0}));
  CHECK(g.num_obstacles() == 2);
  CHECK(g.obstacles() == std::vector<Vertex>{{1, 1}, {2, 3}});
  CHECK_THROWS_AS(GridMap(0, 4), Error);
  CHECK_THROWS_AS(GridMap(2, 2, {{5, 5}}), Error);
}

TEST_CASE("neighbors come in up, down, left, right order") {
  GridMap g(3, 3, {{1, 2}});
  auto n = neighbors(g, {1, 1});
  CHECK(n == std::vector<Vertex>{{0, 1}, {2, 1}, {1, 0}});  // (1,2) is an obstacle
  CHECK(neighbors(g, {0, 0}) == std::vector<Vertex>{{1, 0}, {0, 1}});
  CHECK_THROWS_AS(neighbors(g, {1, 2}), Error);
  CHECK_THROWS_AS(neighbors(g, {9, 9}), Error);
}

TEST_CASE("configuration bookkeeping") {
  Instance inst = grid_instance({"TN.", ".Ng"});
  const Configuration& cfg = inst.start;
  CHECK(cfg.num_targets() == 1);
  CHECK(cfg.num_nontargets() == 2);
  CHECK(cfg.num_uncompleted() == 1);
  CHECK(*cfg.position({0, BlockKind::Target}) == Vertex{0, 0});
  CHECK(*cfg.position({1, BlockKind::NonTarget}) == Vertex{1, 1});
  CHECK(cfg.occupant(inst.grid.index({0, 1})) == BlockId{0, BlockKind::NonTarget});
  CHECK(!cfg.occupant(inst.grid.index({1, 0})));
  CHECK(cfg.is_free(inst.grid.index({1, 2})));
  CHECK(cfg.free_vertices(inst.grid) ==
        std::vector<Vertex>{{0, 2}, {1, 0}, {1, 2}});
  cfg.check_partition(inst.grid);
}

TEST_CASE("two blocks on one cell are rejected") {
  GridMap g(1, 3);
  CHECK_THROWS_AS(Configuration(g, {{0, 0}}, {{0, 0}}), Error);
  CHECK_THROWS_AS(Configuration(g, {{0, 5}}, {}), Error);
}

TEST_CASE("apply_action: moves, waits, completes") {
  Instance inst = grid_instance({"T.g"});
  BlockId t0{0, BlockKind::Target};
  Configuration c1 = apply_action(inst.start, inst.grid, inst.goals, inst.costs,
                                  Action::move(t0, 0, {0, 0}, {0, 1}));
  CHECK(c1.time == 1);
  CHECK(*c1.position(t0) == Vertex{0, 1});
  Configuration c2 = apply_action(c1, inst.grid, inst.goals, inst.costs,
                                  Action::wait(t0, 1, {0, 1}));
  CHECK(*c2.position(t0) == Vertex{0, 1});
  Configuration c3 = apply_action(c2, inst.grid, inst.goals, inst.costs,
                                  Action::move(t0, 2, {0, 1}, {0, 2}));
  Configuration c4 = apply_action(c3, inst.grid, inst.goals, inst.costs,
                                  Action::complete(t0, 3, {0, 2}));
  CHECK(c4.num_uncompleted() == 0);
  CHECK(is_terminal(c4));
  CHECK(c4.is_completed_vertex(inst.grid.index({0, 2})));
  CHECK(!c4.is_free(inst.grid.index({0, 2})));
  CHECK(c4.time == 4);
  c4.check_partition(inst.grid);
}

TEST_CASE("apply_action rejects illegal actions") {
  Instance inst = grid_instance({"TNg"});
  BlockId t0{0, BlockKind::Target};
  BlockId n0{0, BlockKind::NonTarget};
  auto apply = [&](const Action& a) {
    return apply_action(inst.start, inst.grid, inst.goals, inst.costs, a);
  };
  // Occupied destination.
  CHECK_THROWS_AS(apply(Action::move(t0, 0, {0, 0}, {0, 1})), Error);
  // Not at stated source.
  CHECK_THROWS_AS(apply(Action::move(t0, 0, {0, 1}, {0, 2})), Error);
  // Not adjacent.
  CHECK_THROWS_AS(apply(Action::move(n0, 0, {0, 1}, {0, 1})), Error);
  // Off the grid.
  CHECK_THROWS_AS(apply(Action::move(t0, 0, {0, 0}, {-1, 0})), Error);
  // Complete off the goal set.
  CHECK_THROWS_AS(apply(Action::complete(t0, 0, {0, 0})), Error);
  // Non-targets never complete.
  CHECK_THROWS_AS(apply(Action::complete(n0, 0, {0, 1})), Error);
  // Completed vertices become immovable and unenterable.
  Instance done = grid_instance({"t.", "N."});
  Configuration c1 = apply_action(done.start, done.grid, done.goals, done.costs,
                                  Action::complete({0, BlockKind::Target}, 0, {0, 0}));
  CHECK_THROWS_AS(apply_action(c1, done.grid, done.goals, done.costs,
                               Action::move(n0, 1, {1, 0}, {0, 0})),
                  Error);
  CHECK_THROWS_AS(apply_action(c1, done.grid, done.goals, done.costs,
                               Action::wait({0, BlockKind::Target}, 1, {0, 0})),
                  Error);
}

TEST_CASE("instance check rejects malformed inputs") {
  Instance ok = grid_instance({"T.g"});
  CHECK_NOTHROW(ok.check());
  Instance no_goal = grid_instance({"T.."});
  CHECK_THROWS_AS(no_goal.check(), Error);
  Instance no_target = grid_instance({"N.g"});
  CHECK_THROWS_AS(no_target.check(), Error);
  Instance bad_goal = grid_instance({"T.g"});
  bad_goal.goals.shared = {{0, 9}};
  CHECK_THROWS_AS(bad_goal.check(), Error);
}

TEST_CASE("per-target goal lookup") {
  GoalSpec gs;
  gs.per_target = true;
  gs.by_target[0] = {{0, 1}};
  gs.by_target[1] = {{0, 2}, {0, 3}};
  CHECK(is_goal_vertex(gs, 1, {0, 3}));
  CHECK(!is_goal_vertex(gs, 0, {0, 3}));
  CHECK_THROWS_AS(gs.goals_for(7), Error);
}

TEST_CASE("random legal action walks preserve the partition invariant") {
  Rng rng(42);
  Instance inst = grid_instance({"TN.g", ".N..", "T..g"});
  for (int trial = 0; trial < 50; ++trial) {
    Configuration cfg = inst.start;
    for (int step = 0; step < 60 && !is_terminal(cfg); ++step) {
      // Enumerate all legal single actions, pick one at random.
      std::vector<Action> legal;
      for (int i = 0; i < cfg.num_targets(); ++i) {
        if (cfg.target_completed(i)) continue;
        BlockId b{i, BlockKind::Target};
        Vertex at = *cfg.position(b);
        if (is_goal_vertex(inst.goals, i, at))
          legal.push_back(Action::complete(b, cfg.time, at));
        for (Vertex nv : neighbors(inst.grid, at))
          if (cfg.is_free(inst.grid.index(nv)))
            legal.push_back(Action::move(b, cfg.time, at, nv));
      }
      for (int j = 0; j < cfg.num_nontargets(); ++j) {
        BlockId b{j, BlockKind::NonTarget};
        Vertex at = *cfg.position(b);
        for (Vertex nv : neighbors(inst.grid, at))
          if (cfg.is_free(inst.grid.index(nv)))
            legal.push_back(Action::move(b, cfg.time, at, nv));
      }
      if (legal.empty()) break;
      Action a = legal[rng.below_int(static_cast<int>(legal.size()))];
      cfg = apply_action(cfg, inst.grid, inst.goals, inst.costs, a);
      cfg.check_partition(inst.grid);
    }
  }
}

TEST_CASE("deterministic rng") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.below(10) < 10);
    double u = c.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  Rng d(9);
  d.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  Rng e(9);
  auto s = e.sample(std::vector<int>{1, 2, 3, 4, 5}, 3);
  CHECK(s.size() == 3);
}
