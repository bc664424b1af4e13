#pragma once

#include <limits>
#include <map>
#include <set>
#include <vector>

#include "brap/model.hpp"
#include "brap/plan.hpp"
#include "brap/solve.hpp"

namespace brap {

// Per-vertex earliest timestep at which later plans may touch the vertex.
struct BlockingTimes {
  static constexpr int kForever = std::numeric_limits<int>::max();
  std::map<Vertex, int> earliest_free;

  // 0 for vertices no committed plan ever touches.
  int at(const Vertex& v) const {
    auto it = earliest_free.find(v);
    return it == earliest_free.end() ? 0 : it->second;
  }
  void bump(const Vertex& v, int t) {
    int& slot = earliest_free[v];
    slot = std::max(slot, t);
  }
};

// earliest_free(u) = 1 + the latest timestep any action of `plan` uses u (as
// move source or destination, wait cell, or completion cell); completion
// cells are blocked forever.
BlockingTimes compute_vertex_blocking_time(const Plan& plan);

// Non-target moves that walk the nearest blank onto `u` (15-puzzle style: the
// chain of blocks between u and the blank each shift one step toward the
// blank, serialized across timesteps). The blank is searched breadth-first
// through free or non-target cells, never through `forbidden`, obstacles,
// completed cells, or targets; equidistant blanks tie-break row-major. Every
// action is stamped no earlier than psi on both cells it touches. Throws
// no-blank when no blank is reachable. Returns an empty list if u is already
// free.
std::vector<Action> move_blank_to_vertex(const Configuration& cfg, const GridMap& grid,
                                         Vertex u, const std::set<Vertex>& forbidden,
                                         const BlockingTimes& psi);

// Algorithm: targets in priority order; each walks its least-blocking path on
// the map with all earlier plans applied, pulling the closest blank ahead of
// itself one path vertex at a time, then completes. Vertex blocking times
// order actions across targets, so independent regions overlap in time.
SolveResult solve_greedy(const Instance& inst, double budget_seconds);

}  // namespace brap
