#pragma once

#include <cstdint>
#include <optional>

#include "brap/plan.hpp"

// Brute-force ground truth for tiny instances: exhaustive uniform-cost search
// over the full configuration graph, one action per timestep. Used by tests
// as the reference optimum; deliberately self-contained (its own expansion
// and cost accounting) so solver bugs cannot hide in shared code.
namespace brap {

struct OracleResult {
  std::optional<double> optimal_cost;  // nullopt = proven infeasible
  Plan optimal_plan;                   // empty when infeasible
  std::int64_t states_explored = 0;

  bool infeasible() const { return !optimal_cost.has_value(); }
};

// Exact optimum (or proof of infeasibility) of the composite cost, where a
// step's cost is the acted action's cost plus one target-wait charge for
// every other uncompleted target (idle time before completion is paid for).
// Non-target blocks are interchangeable, so states are keyed on the set of
// occupied non-target cells; pass anonymize = false to key on identities
// instead (slower; used to cross-check the reduction). Throws too-large when
// the state count would exceed `state_cap`.
OracleResult oracle_solve(const Instance& inst, std::int64_t state_cap = 2'000'000,
                          bool anonymize = true);

}  // namespace brap
