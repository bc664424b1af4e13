#pragma once

#include <map>
#include <string>
#include <vector>

#include "brap/model.hpp"
#include "brap/solve.hpp"

// Benchmark harness: budgeted solver runs, record aggregation into
// grouped success/ratio tables, and CSV/JSON serialization.
namespace brap {

enum class RunStatus { Success, Timeout, Infeasible, Failure, Error, Skipped };
const char* run_status_name(RunStatus s);

// One (instance, solver) outcome. Success is only ever recorded after the
// returned plan has passed the validator.
struct RunRecord {
  std::string label;
  std::string solver;
  RunStatus status = RunStatus::Error;
  double first_time_ms = 0.0;
  double first_cost = 0.0;
  double final_cost = 0.0;
  double final_makespan = 0.0;
  int horizon = 0;
  std::string detail;  // diagnostics for non-success statuses
};

// Solver names accepted by run_with_budget, in report column order.
const std::vector<std::string>& known_solvers();

// Runs one solver on one instance under a wall-clock budget. Exceptions
// become status Error; they never escape. The "pddl-export" solver shells
// out to the command named by the BRAP_PDDL_PLANNER environment variable
// (invoked as: <cmd> <domain-file> <problem-file> <plan-out-file>) and is
// recorded as Skipped when that variable is unset.
RunRecord run_with_budget(const Instance& inst, const std::string& solver,
                          double budget_seconds);

struct BenchOptions {
  double budget_seconds = 10.0;
  int workers = 1;
  std::vector<std::string> solvers;  // empty = all known solvers
};

// Runs every requested solver on every instance. Instances are distributed
// over `workers` threads; each (instance, solver) run is single-threaded and
// the returned record order does not depend on thread scheduling.
std::vector<RunRecord> run_suite(const std::vector<Instance>& instances,
                                 const BenchOptions& opts);

struct SolverGroupStats {
  int runs = 0;
  int successes = 0;
  double success_rate = 0.0;  // percent
  // Ratio metrics are reported only when the group's success rate is at
  // least 20 percent; below that they stay false/zero (printed as N/A).
  bool ratios_reported = false;
  double cost_ratio_mean = 0.0;
  double cost_ratio_std = 0.0;
  double makespan_ratio_mean = 0.0;
  double makespan_ratio_std = 0.0;
  double first_time_mean_ms = 0.0;
  double first_time_max_ms = 0.0;
};

struct Report {
  std::vector<std::string> solvers;  // column order
  // group name ("all", "grid:4x10", "goal:B", "targets:3") -> solver -> stats
  std::map<std::string, std::map<std::string, SolverGroupStats>> groups;
  // pairwise mean final-cost and makespan ratios over co-solvable instances
  std::map<std::string, std::map<std::string, double>> pairwise_cost;
  std::map<std::string, std::map<std::string, double>> pairwise_makespan;
  std::map<std::string, std::map<std::string, int>> pairwise_count;
};

// Groups records by the requested label dimensions (grid, goal, targets) and
// computes per-instance-baseline ratios: baseline = the smallest successful
// final cost (or makespan) on that instance, so every ratio is >= 1.
Report aggregate(const std::vector<RunRecord>& records,
                 const std::vector<std::string>& groupings = {"grid", "goal",
                                                              "targets"});

// Record CSV: fixed, versioned column set; one row per record.
inline constexpr int kRecordsCsvVersion = 1;
extern const char* const kRecordsCsvHeader;
std::string records_to_csv(const std::vector<RunRecord>& records);

std::string report_to_json(const Report& report);

// Pulls one dimension ("grid", "goal", "targets", "blanks", "case") out of a
// generated label like "g4x10-t3-b2-B-c7"; empty when it does not parse.
std::string label_dimension(const std::string& label, const std::string& dim);

}  // namespace brap
