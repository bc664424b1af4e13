#pragma once

#include <map>

#include "brap/model.hpp"

// Paths, plans, cost metrics, and the simulating validator.
namespace brap {

// Time-ordered action sequence of one block.
struct Path {
  BlockId block;
  std::vector<Action> actions;  // strictly increasing t, spatially chained
};

struct Plan {
  std::map<BlockId, Path> paths;

  // Appends `a` to its block's path, keeping the path time-ordered.
  void add(const Action& a);
  bool empty() const { return paths.empty(); }
};

struct Metrics {
  double composite_cost = 0.0;
  double makespan = 0.0;  // max per-path cost, not last timestamp
  int moves_target = 0;
  int moves_nontarget = 0;
};

double action_cost(const Action& a, const CostModel& costs);

// Sum of action costs along one path.
double path_cost(const Path& p, const CostModel& costs);

// Composite cost (sum of path costs), makespan (max path cost), move counts.
Metrics metrics(const Plan& P, const CostModel& costs);

// Wall-clock plan duration: last timestamp + 1 (0 for an empty plan).
int plan_horizon(const Plan& P);

// Simulates the plan timestep by timestep using start-of-step occupancy and
// returns the terminal configuration. Throws Error with codes vertex-conflict,
// edge-conflict, following-conflict, illegal-action, or incomplete-target,
// carrying the offending timestep and vertices.
Configuration validate(const Plan& P, const Instance& inst);

// Inserts an explicit Wait for every timestep a target is idle before an
// action of its own path (so idle time ahead of completion is charged at the
// target wait rate). Non-target paths are left untouched.
void fill_target_waits(Plan& P, const Instance& inst);

}  // namespace brap
