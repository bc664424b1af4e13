#include "doctest.h"

#include "brap/oracle.hpp"
#include "fixtures.hpp"

using namespace brap;

// Expected optima in this file are derived by hand from the action-cost
// table before running anything: moves cost 2, completes 2, and a target
// pays 1 per timestep it sits idle before its completion.

TEST_CASE("oracle: straight corridor costs three moves plus a complete") {
  Instance inst = grid_instance({"T..g"});
  OracleResult r = oracle_solve(inst);
  REQUIRE(r.optimal_cost.has_value());
  CHECK(*r.optimal_cost == 8.0);  // 3*2 + 2, no idle steps
  CHECK(r.states_explored > 0);
  Configuration end = validate(r.optimal_plan, inst);
  CHECK(is_terminal(end));
  CHECK(metrics(r.optimal_plan, inst.costs).composite_cost == 8.0);
}

TEST_CASE("oracle: adjacent goal costs one move plus a complete") {
  Instance inst = grid_instance({"Tg"});
  OracleResult r = oracle_solve(inst);
  REQUIRE(r.optimal_cost.has_value());
  CHECK(*r.optimal_cost == 4.0);
}

TEST_CASE("oracle: target already on its goal just completes") {
  Instance inst = grid_instance({"t"});
  OracleResult r = oracle_solve(inst);
  REQUIRE(r.optimal_cost.has_value());
  CHECK(*r.optimal_cost == 2.0);
  CHECK(metrics(r.optimal_plan, inst.costs).composite_cost == 2.0);
}

TEST_CASE("oracle: serial two-target solve charges the idle target") {
  // Optimal: finish one target in 3 steps (the other waits 3), then the
  // second acts alone: 2*(2+2+2) + 3*1 = 15.
  Instance inst = grid_instance({"T.g", "T.g"});
  OracleResult r = oracle_solve(inst);
  REQUIRE(r.optimal_cost.has_value());
  CHECK(*r.optimal_cost == 15.0);
  Metrics m = metrics(r.optimal_plan, inst.costs);
  CHECK(m.composite_cost == 15.0);
  CHECK_NOTHROW(validate(r.optimal_plan, inst));
}

TEST_CASE("oracle: clearing one blocker then walking through") {
  // N at (0,1) steps aside (target idles that step), then 3 moves + complete:
  // 2 + 1 + 6 + 2 = 11.
  Instance inst = grid_instance({"TN.g", "N..."});
  OracleResult r = oracle_solve(inst);
  REQUIRE(r.optimal_cost.has_value());
  CHECK(*r.optimal_cost == 11.0);
  CHECK(metrics(r.optimal_plan, inst.costs).composite_cost == 11.0);
  CHECK_NOTHROW(validate(r.optimal_plan, inst));
}

TEST_CASE("oracle: corridor with a side pocket") {
  // The blocker ducks into the pocket; the target idles once: 2+1+8+2 = 13.
  Instance inst = grid_instance({"T.N.g", "....."});
  OracleResult r = oracle_solve(inst);
  REQUIRE(r.optimal_cost.has_value());
  CHECK(*r.optimal_cost == 13.0);
}

TEST_CASE("oracle proves sealed corridors infeasible") {
  // 1x3: the non-target can only retreat onto the goal; every branch dies.
  Instance seal = grid_instance({"TNg"});
  OracleResult r1 = oracle_solve(seal);
  CHECK(r1.infeasible());
  CHECK(r1.states_explored > 0);
  // 1x5 with the blocker between target and the only goal: still infeasible,
  // because the corridor has no siding.
  Instance corridor = grid_instance({"T.N.g"});
  CHECK(oracle_solve(corridor).infeasible());
  // Obstacle wall.
  Instance wall = grid_instance({"T#g"});
  CHECK(oracle_solve(wall).infeasible());
}

TEST_CASE("oracle: anonymized and identity-keyed searches agree") {
  for (const auto& rows : {std::vector<std::string>{"TN.g", "N..."},
                           std::vector<std::string>{"TN.", ".Ng"},
                           std::vector<std::string>{"NTg", ".N."}}) {
    Instance inst = grid_instance(rows);
    OracleResult anon = oracle_solve(inst, 2'000'000, true);
    OracleResult named = oracle_solve(inst, 20'000'000, false);
    REQUIRE(anon.optimal_cost.has_value() == named.optimal_cost.has_value());
    if (anon.optimal_cost) {
      CHECK(*anon.optimal_cost == *named.optimal_cost);
      CHECK_NOTHROW(validate(anon.optimal_plan, inst));
      CHECK_NOTHROW(validate(named.optimal_plan, inst));
    }
    CHECK(anon.states_explored <= named.states_explored);
  }
}

TEST_CASE("oracle refuses instances over the state cap") {
  Instance inst = grid_instance({"TN.g", "N..."});
  CHECK_THROWS_AS(oracle_solve(inst, 3), Error);
  try {
    oracle_solve(inst, 3);
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::too_large);
  }
}
