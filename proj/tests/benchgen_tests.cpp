#include <set>
#include <string>
#include <vector>

#include "brap/benchgen.hpp"
#include "brap/io.hpp"
#include "brap/rng.hpp"
#include "doctest.h"

using namespace brap;

namespace {

bool same_ladders(const std::vector<GridSpec>& a, const std::vector<GridSpec>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].height != b[i].height || a[i].width != b[i].width ||
        a[i].targets != b[i].targets || a[i].blanks != b[i].blanks)
      return false;
  return true;
}

int count_free(const Instance& inst) {
  int n = 0;
  for (int i = 0; i < inst.grid.size(); ++i)
    if (inst.grid.passable(inst.grid.vertex(i)) && inst.start.is_free(i)) ++n;
  return n;
}

}  // namespace

TEST_CASE("identical parameters and case index reproduce identical instances") {
  InstanceParams p{10, 10, 5, 8, GoalType::R1, 42};
  Instance a = generate_instance(p, 3);
  Instance b = generate_instance(p, 3);
  CHECK(instance_to_json(a) == instance_to_json(b));
  CHECK(a.label == "g10x10-t5-b8-R1-c3");
  Instance c = generate_instance(p, 4);
  CHECK(instance_to_json(a) != instance_to_json(c));
  InstanceParams q = p;
  q.master_seed = 43;
  CHECK(instance_to_json(a) != instance_to_json(generate_instance(q, 3)));
}

TEST_CASE("per-instance seed mixes the stated fields in the stated order") {
  InstanceParams p{6, 10, 3, 5, GoalType::R2, 7};
  uint64_t s = 7;
  for (uint64_t v : {6ULL, 10ULL, 3ULL, 5ULL, 2ULL, 9ULL}) s = mix64(s, v);
  CHECK(instance_seed(p, 9) == s);
}

TEST_CASE("obstacle square sits flush with the bottom-right corner") {
  SUBCASE("10x10 carries a 2x2 square on rows and columns 8..9") {
    Instance inst = generate_instance({10, 10, 1, 1, GoalType::R1, 1}, 0);
    for (int r = 0; r < 10; ++r)
      for (int c = 0; c < 10; ++c)
        CHECK(inst.grid.passable({r, c}) == !(r >= 8 && c >= 8));
  }
  SUBCASE("4x10 has no obstacle at all") {
    Instance inst = generate_instance({4, 10, 1, 1, GoalType::R1, 1}, 0);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 10; ++c) CHECK(inst.grid.passable({r, c}));
  }
  SUBCASE("20x20 carries a 4x4 square") {
    Instance inst = generate_instance({20, 20, 1, 1, GoalType::R1, 1}, 0);
    int blocked = 0;
    for (int r = 0; r < 20; ++r)
      for (int c = 0; c < 20; ++c)
        if (!inst.grid.passable({r, c})) {
          ++blocked;
          CHECK(r >= 16);
          CHECK(c >= 16);
        }
    CHECK(blocked == 16);
  }
}

TEST_CASE("goal type B marks every non-obstacle boundary vertex") {
  Instance inst = generate_instance({10, 10, 3, 5, GoalType::B, 11}, 2);
  CHECK_FALSE(inst.goals.per_target);
  std::set<Vertex> got(inst.goals.shared.begin(), inst.goals.shared.end());
  CHECK(got.size() == inst.goals.shared.size());  // no duplicates
  std::set<Vertex> want;
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c)
      if ((r == 0 || r == 9 || c == 0 || c == 9) && inst.grid.passable({r, c}))
        want.insert({r, c});
  CHECK(got == want);
  CHECK(got.size() == 33);  // 36 boundary cells minus the 3 obstructed ones
}

TEST_CASE("random goal sets have the advertised sizes and stay off obstacles") {
  InstanceParams p{10, 10, 4, 6, GoalType::R1, 5};
  Instance r1 = generate_instance(p, 0);
  CHECK(r1.goals.shared.size() == 4);
  p.goal = GoalType::R2;
  Instance r2 = generate_instance(p, 0);
  CHECK(r2.goals.shared.size() == 8);
  for (const Instance* inst : {&r1, &r2}) {
    std::set<Vertex> seen;
    for (Vertex v : inst->goals.shared) {
      CHECK(inst->grid.passable(v));
      CHECK(seen.insert(v).second);  // sampled without replacement
    }
  }
}

TEST_CASE("per-target goals: five distinct vertices for every target") {
  Instance inst = generate_instance({8, 10, 4, 6, GoalType::PerTarget5, 17}, 3);
  CHECK(inst.goals.per_target);
  CHECK(inst.goals.by_target.size() == 4);
  CHECK(inst.label == "g8x10-t4-b6-P5-c3");
  for (const auto& [id, gs] : inst.goals.by_target) {
    CHECK(gs.size() == 5);
    std::set<Vertex> seen;
    for (Vertex v : gs) {
      CHECK(inst.grid.passable(v));
      CHECK(seen.insert(v).second);
    }
  }
}

TEST_CASE("targets, blanks, and non-targets partition the non-obstacle cells") {
  Instance inst = generate_instance({8, 10, 4, 6, GoalType::B, 5}, 1);
  CHECK(inst.start.num_targets() == 4);
  CHECK(count_free(inst) == 6);
  // 8x10 has one obstructed cell, so non-targets fill the other 69
  CHECK(inst.start.num_nontargets() == 80 - 1 - 4 - 6);
  CHECK_NOTHROW(inst.check());
}

TEST_CASE("suite sizes match the published protocols") {
  CHECK(suite_size(main_suite(0)) == 13860);
  CHECK(suite_size(per_target_suite(0)) == 4620);
  CHECK(suite_size(main_suite(0, 1)) == 1440);       // 4x10 rung only
  CHECK(suite_size(per_target_suite(0, 4)) == 1920); // the four small grids
  int n = 0;
  for_each_instance(main_suite(123, 1), [&](Instance&&) { ++n; });
  CHECK(n == 1440);
}

TEST_CASE("suite streaming is deterministic") {
  auto first_labels = [](const SuiteParams& sp, int k) {
    std::vector<std::string> out;
    int n = 0;
    for_each_instance(sp, [&](Instance&& inst) {
      if (n++ < k) out.push_back(instance_to_json(inst));
    });
    return out;
  };
  SuiteParams sp = per_target_suite(9, 1);
  sp.cases_per_combo = 2;
  CHECK(first_labels(sp, 6) == first_labels(sp, 6));
}

TEST_CASE("ladder manifest: denominations, JSON round-trip, vendored copy") {
  const std::vector<GridSpec> def = default_ladders();
  REQUIRE(def.size() == 7);
  int combos = 0;
  for (const GridSpec& g : def) {
    combos += static_cast<int>(g.targets.size() * g.blanks.size());
    CHECK(g.targets.front() == 1);
    CHECK(g.blanks.front() == 1);
    CHECK(std::is_sorted(g.targets.begin(), g.targets.end()));
    CHECK(std::is_sorted(g.blanks.begin(), g.blanks.end()));
    // every ladder tops out at a quarter of the grid vertices
    CHECK(g.blanks.back() == g.height * g.width / 4);
  }
  CHECK(combos == 462);
  CHECK(same_ladders(ladders_from_json(ladders_to_json(def)), def));
  const std::string vendored = read_file(std::string(BRAP_DATA_DIR) + "/ladders.json");
  CHECK(same_ladders(ladders_from_json(vendored), def));
  CHECK(ladders_to_json(def) == vendored);
}

TEST_CASE("impossible generation requests are rejected") {
  auto bad = [](InstanceParams p, int idx = 0) {
    try {
      generate_instance(p, idx);
    } catch (const Error& e) {
      return e.code == ErrorCode::parameter_error;
    }
    return false;
  };
  CHECK(bad({4, 10, 0, 1, GoalType::B, 0}));        // no target
  CHECK(bad({4, 10, 1, 0, GoalType::B, 0}));        // no blank
  CHECK(bad({4, 10, 30, 11, GoalType::B, 0}));      // 41 cells wanted, 40 exist
  CHECK(bad({4, 10, 21, 1, GoalType::R2, 0}));      // 42 goal samples, 40 cells
  CHECK(bad({2, 2, 1, 1, GoalType::PerTarget5, 0})); // 5 goals, 4 cells
  CHECK(bad({4, 10, 1, 1, GoalType::B, 0}, -1));    // negative case index
}

TEST_CASE("broken ladder manifests are rejected as parse errors") {
  auto bad = [](const std::string& text) {
    try {
      ladders_from_json(text);
    } catch (const Error& e) {
      return e.code == ErrorCode::parse_error;
    }
    return false;
  };
  CHECK(bad("not json"));
  CHECK(bad("{}"));
  CHECK(bad("{\"grids\": []}"));
  CHECK(bad("{\"grids\": [{\"height\": 4}]}"));
  CHECK(bad("{\"grids\": [{\"height\": 4, \"width\": 10, \"targets\": [], \"blanks\": [1]}]}"));
}
