#pragma once

#include <string>

#include "brap/model.hpp"
#include "brap/plan.hpp"

// Classical-planning bridge: emit the grid as a STRIPS domain/problem pair
// ("node-<r>-<c>" objects, tgt/blo/fre/cmp/goal/adjacent predicates) and read
// an external planner's totally-ordered plan back into a Plan.
namespace brap {

// The fixed sliding domain. The verbatim listing declares :action-costs but
// carries no (increase (total-cost) ...) effects; `costed` opts into a
// variant with explicit unit costs wired in, clearly labeled as an extension.
std::string emit_domain(bool costed = false);

// Problem text for an instance: objects exclude obstacles, every non-target
// vertex starts cmp, and the goal asks for cmp everywhere. Per-target goal
// sets cannot be expressed (the domain has one anonymous goal predicate) and
// raise unsupported_goal. `costed` adds the total-cost init and metric for
// use with the costed domain variant.
std::string emit_problem(const Instance& inst, bool costed = false);

// Parses "(slide_tgt node-a-b node-c-d)" / "(slide_blo ...)" / "(complete
// node-a-b)" lines into a Plan with sequential timestamps, resolving block
// identity by simulating occupancy from the start configuration. Comment
// lines (";...") and blank lines are ignored. Violations raise parse_error
// naming the offending line.
Plan parse_plan_file(const std::string& text, const Instance& inst);

}  // namespace brap
