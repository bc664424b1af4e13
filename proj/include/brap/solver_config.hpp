#pragma once

#include "brap/solve.hpp"

namespace brap {

// Optimal A* over the joint configuration space: one action per timestep,
// wait never expanded (idle targets are still charged, and the explicit
// waits are materialized in the returned plan). Duplicate detection on
// (target positions, non-target occupancy set, completed set) ignoring time;
// tie-break on f, then h, then insertion order. Returns Timeout when the
// budget runs out first and Infeasible when the space is exhausted.
SolveResult solve_astar(const Instance& inst, double budget_seconds);

}  // namespace brap
