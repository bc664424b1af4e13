#pragma once

#include <map>
#include <optional>
#include <vector>

#include "brap/solve.hpp"

// MAPF-style anytime solver: a depth-first high-level search over
// configurations, seeded by a one-step generator that lets blocks call for
// empty cells in priority order, with lazily grown low-level constraints
// forcing alternative successors when the generator repeats itself.
namespace brap {

// Dynamic target priorities: reset into (0,1) on reaching the temporary goal,
// incremented by one per step spent elsewhere.
struct PriorityTable {
  std::map<int, double> value;  // target id -> priority
};

// Temporary goal vertex per target; assigned vertices are pairwise distinct
// and always drawn from the owning target's goal set.
struct TempGoals {
  std::map<int, Vertex> assigned;  // target id -> claimed goal vertex

  std::optional<Vertex> get(int id) const {
    auto it = assigned.find(id);
    if (it == assigned.end()) return std::nullopt;
    return it->second;
  }
};

// Forces one block's decision for the next step: move to an adjacent empty
// vertex, stay put (where == current vertex), or complete in place.
struct LowLevelConstraint {
  BlockId who;
  Vertex where;
  bool complete = false;
};

struct PibtStep {
  Configuration config;  // next configuration, completions applied
  TempGoals temp_goals;
  PriorityTable priorities;
};

// One synchronous step: updates priorities, auto-completes targets standing
// on their temporary goals, pre-commits `forced` decisions, then lets targets
// claim moves in descending priority, recursively pushing blockers. A block
// only ever moves into a vertex that was empty at the start of the step;
// pushed blocks may not choose to wait. Throws constraint_conflict when two
// forced decisions claim one vertex.
PibtStep brap_pibt_step(const Configuration& cfg, const Instance& inst,
                        const PriorityTable& omega, const TempGoals& goals,
                        const std::vector<LowLevelConstraint>& forced);

// Anytime solve: DFS over configurations; revisiting an explored
// configuration grows the parent's constraint tree (blocks adjacent to empty
// vertices x their empty neighbors / stay / complete-in-place), which
// eventually enumerates every successor. After the first solution the search
// keeps improving within the budget, pruning nodes whose cost-so-far plus
// h_state exceeds the incumbent. With stop_at_first the solver returns as
// soon as any solution exists (first_cost == final_cost), useful when only
// solvability within the budget matters.
SolveResult lacam_solve(const Instance& inst, double budget_seconds,
                        bool stop_at_first = false);

}  // namespace brap
