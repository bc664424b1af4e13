#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <string>

#include "brap/plan.hpp"

// Shared solver plumbing: results, statuses, cooperative deadlines.
namespace brap {

enum class SolveStatus {
  Success,
  Timeout,     // budget exhausted before any solution
  Infeasible,  // search space exhausted, provably no solution
  Failure,     // solver-specific give-up (incomplete methods)
};

const char* solve_status_name(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Failure;
  Plan plan;                    // only meaningful on Success
  double composite_cost = 0.0;  // == final_cost
  double makespan = 0.0;
  double first_cost = 0.0;    // first solution found (anytime solvers)
  double final_cost = 0.0;    // best solution found
  double first_time_ms = 0.0;  // wall clock to the first solution
  std::int64_t nodes_expanded = 0;
  std::string detail;  // failure diagnostics, e.g. the stuck target

  bool success() const { return status == SolveStatus::Success; }
};

// Wall-clock budget polled cooperatively at node-expansion granularity.
class Deadline {
 public:
  // budget_seconds <= 0 or +inf means unlimited.
  explicit Deadline(double budget_seconds)
      : start_(std::chrono::steady_clock::now()),
        unlimited_(budget_seconds <= 0.0 ||
                   budget_seconds == std::numeric_limits<double>::infinity()),
        end_(start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(
                              unlimited_ ? 0.0 : budget_seconds))) {}

  bool expired() const {
    return !unlimited_ && std::chrono::steady_clock::now() >= end_;
  }

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
  bool unlimited_;
  std::chrono::steady_clock::time_point end_;
};

// Finalizes a successful result: records the explicit target idle time, runs
// the metrics, and stamps costs. `first_cost` must be set by anytime solvers
// before calling; non-anytime solvers leave it 0 and get first == final.
void finish_success(SolveResult& r, const Instance& inst, Plan plan,
                    double first_time_ms);

}  // namespace brap
