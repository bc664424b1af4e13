#include "brap/solve.hpp"

namespace brap {

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Success: return "success";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Failure: return "failure";
  }
  return "unknown";
}

void finish_success(SolveResult& r, const Instance& inst, Plan plan,
                    double first_time_ms) {
  fill_target_waits(plan, inst);
  Metrics m = metrics(plan, inst.costs);
  r.status = SolveStatus::Success;
  r.plan = std::move(plan);
  r.composite_cost = m.composite_cost;
  r.makespan = m.makespan;
  r.final_cost = m.composite_cost;
  if (r.first_cost == 0.0) r.first_cost = m.composite_cost;
  r.first_time_ms = first_time_ms;
  return;
}

}  // namespace brap
