#pragma once

#include "brap/model.hpp"

// Least-blocking paths, the admissible per-configuration heuristic, and the
// target priority ordering derived from it.
namespace brap {

struct LeastBlockingPath {
  std::vector<Vertex> vertices;  // start = target's vertex, last = a goal
  int blocking = 0;              // occupied vertices on the path, excluding start
  int length = 0;                // edge count
};

// Traversal weight per cell kind; obstacles and completed vertices are
// always impassable.
struct TraversalWeights {
  double free_cell = 0.0;
  double nontarget_cell = 0.0;
  double target_cell = 0.0;
};

// Default path-choice weights: a free cell costs one target move; displacing
// a non-target adds one non-target move; displacing another target is
// penalized twice as hard because it must later be re-routed.
TraversalWeights default_weights(const CostModel& costs);

// Minimum-weight path from the target's vertex to the nearest goal vertex.
// Weights apply on entering a cell. Deterministic tie-break: total weight,
// then edge count, then row-major vertex order. Throws unreachable_goal when
// no goal vertex can be reached.
LeastBlockingPath least_blocking_path(const Configuration& cfg, const GridMap& grid,
                                      BlockId target, const std::vector<Vertex>& goals,
                                      const TraversalWeights& weights);

enum class HAggregate { Mean, Max };

struct HState {
  double value = 0.0;
  std::vector<double> per_target;  // h(s,i); 0 for completed targets
};

// Per-target lower bound h(s,i) = L·move_tgt + B·min(move_tgt, move_non)
// + complete_tgt over a path minimizing exactly that quantity (L = edges,
// B = blocked vertices entered; one displacement move per blocker keeps the
// bound admissible regardless of blocker kind). Aggregate value is the mean
// over all targets (completed ones contribute 0); Max is a non-default
// alternative. Throws unreachable_goal if some uncompleted target cannot
// reach any goal vertex.
HState h_state(const Configuration& cfg, const Instance& inst,
               HAggregate aggregate = HAggregate::Mean);

// Uncompleted targets ordered by ascending h(s,i), ties by ascending id
// (smaller value = higher priority, planned first).
std::vector<BlockId> compute_priority(const Configuration& cfg, const Instance& inst);

}  // namespace brap
