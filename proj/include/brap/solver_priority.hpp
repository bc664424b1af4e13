#pragma once

#include <map>
#include <set>
#include <utility>

#include "brap/model.hpp"
#include "brap/plan.hpp"
#include "brap/solve.hpp"

namespace brap {

// Space-time constraints extracted from already-committed plans. Lower-ranked
// searches must not disturb any (vertex, timestep) pair a committed plan
// relies on.
struct ConstraintSet {
    // Move sources: the named block must still be at this vertex when its
    // committed move fires.
    std::map<std::pair<Vertex, int>, BlockId> occupied_at;
    // Move destinations: must be empty at the start of that timestep.
    std::set<std::pair<Vertex, int>> must_be_free;
    // Vertices no other action may touch at that timestep (move endpoints and
    // wait cells).
    std::set<std::pair<Vertex, int>> frozen;
    // Completion cells are out of bounds forever from the completion step on;
    // value is the first frozen timestep.
    std::map<Vertex, int> frozen_forever;

    bool is_frozen(const Vertex& v, int t) const {
        auto it = frozen_forever.find(v);
        if (it != frozen_forever.end() && t >= it->second) return true;
        return frozen.count({v, t}) > 0;
    }
    bool empty() const {
        return occupied_at.empty() && must_be_free.empty() && frozen.empty() &&
               frozen_forever.empty();
    }
};

// Builds the constraint set a committed plan imposes on later searches.
ConstraintSet compute_constraint(const Plan& plan);

// Plans targets one at a time in priority order (most promising first). Each
// target gets a time-expanded single-agent search in which earlier plans are
// replayed as forced transitions; the union of all per-target plans executes
// in parallel. No reordering on failure: if some target cannot find a
// constrained plan, the whole solve fails and names it.
SolveResult solve_priority(const Instance& inst, double budget_seconds);

}  // namespace brap
