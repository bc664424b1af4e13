// Command-line front end: suite generation, single-instance solving, plan
// validation, PDDL export/import, and budgeted benchmark runs.
//
// Exit codes: 0 success, 2 invalid input, 3 validation failure,
// 4 timeout (solve only).

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brap/bench.hpp"
#include "brap/benchgen.hpp"
#include "brap/error.hpp"
#include "brap/io.hpp"
#include "brap/pddl.hpp"
#include "brap/solve.hpp"
#include "brap/solver_config.hpp"
#include "brap/solver_greedy.hpp"
#include "brap/solver_lacam.hpp"
#include "brap/solver_priority.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace brap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitValidationFailure = 3;
constexpr int kExitTimeout = 4;

Instance load_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

std::vector<GridSpec> load_ladders(const std::string& path) {
  if (path.empty()) return default_ladders();
  return ladders_from_json(read_file(path));
}

SuiteParams build_suite(const std::string& suite, uint64_t seed, int scale,
                        const std::string& ladders_path) {
  SuiteParams params;
  if (suite == "main")
    params = main_suite(seed, scale);
  else if (suite == "per-target")
    params = per_target_suite(seed, scale);
  else
    throw Error(ErrorCode::parameter_error,
                "unknown suite '" + suite + "' (expected main or per-target)");
  if (!ladders_path.empty()) params.grids = load_ladders(ladders_path);
  return params;
}

int cmd_gen(const std::string& out_dir, const std::string& suite, uint64_t seed,
            int scale, const std::string& ladders_path, int64_t limit) {
  SuiteParams params = build_suite(suite, seed, scale, ladders_path);
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "ladders.json").string(),
             ladders_to_json(params.grids));
  int64_t written = 0;
  try {
    for_each_instance(params, [&](Instance&& inst) {
      if (limit > 0 && written >= limit)
        throw std::runtime_error("limit reached");  // stops the stream
      write_file((fs::path(out_dir) / (inst.label + ".json")).string(),
                 instance_to_json(inst));
      ++written;
    });
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()) != "limit reached") throw;
  }
  std::cout << "wrote " << written << " of " << suite_size(params)
            << " instances to " << out_dir << "\n";
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, const std::string& solver,
              double budget, const std::string& plan_out, bool as_json) {
  Instance inst = load_instance(instance_path);
  RunRecord rec;
  if (solver == "pddl-export") {
    if (!plan_out.empty())
      throw Error(ErrorCode::parameter_error,
                  "--plan-out is not supported for pddl-export; the external "
                  "planner owns the plan file");
    rec = run_with_budget(inst, solver, budget);
  } else {
    SolveResult r;
    Deadline deadline(budget);
    if (solver == "config")
      r = solve_astar(inst, budget);
    else if (solver == "priority")
      r = solve_priority(inst, budget);
    else if (solver == "greedy")
      r = solve_greedy(inst, budget);
    else if (solver == "mapf")
      r = lacam_solve(inst, budget);
    else
      throw Error(ErrorCode::parameter_error, "unknown solver '" + solver + "'");
    rec.label = inst.label;
    rec.solver = solver;
    rec.detail = r.detail;
    switch (r.status) {
      case SolveStatus::Success:
        validate(r.plan, inst);  // never report an unchecked plan as solved
        rec.status = RunStatus::Success;
        rec.first_time_ms = r.first_time_ms;
        rec.first_cost = r.first_cost;
        rec.final_cost = r.final_cost;
        rec.final_makespan = r.makespan;
        rec.horizon = plan_horizon(r.plan);
        if (!plan_out.empty()) write_file(plan_out, plan_to_text(r.plan));
        break;
      case SolveStatus::Timeout:
        rec.status = RunStatus::Timeout;
        break;
      case SolveStatus::Infeasible:
        rec.status = RunStatus::Infeasible;
        break;
      case SolveStatus::Failure:
        rec.status = RunStatus::Failure;
        break;
    }
  }
  if (as_json) {
    nlohmann::json doc{{"label", rec.label},
                       {"solver", rec.solver},
                       {"status", run_status_name(rec.status)},
                       {"first_time_ms", rec.first_time_ms},
                       {"first_cost", rec.first_cost},
                       {"final_cost", rec.final_cost},
                       {"final_makespan", rec.final_makespan},
                       {"horizon", rec.horizon},
                       {"detail", rec.detail}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << rec.solver << " on " << rec.label << ": "
              << run_status_name(rec.status);
    if (rec.status == RunStatus::Success)
      std::cout << " cost=" << rec.final_cost << " makespan=" << rec.final_makespan
                << " horizon=" << rec.horizon << " first_ms=" << rec.first_time_ms;
    if (!rec.detail.empty()) std::cout << " (" << rec.detail << ")";
    std::cout << "\n";
  }
  if (rec.status == RunStatus::Timeout) return kExitTimeout;
  if (rec.status == RunStatus::Error) return kExitInvalidInput;
  return kExitOk;
}

int cmd_validate(const std::string& instance_path, const std::string& plan_path) {
  Instance inst = load_instance(instance_path);
  Plan plan;
  try {
    plan = plan_from_text(read_file(plan_path));
  } catch (const Error& e) {
    std::cerr << "plan does not parse: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  try {
    validate(plan, inst);
  } catch (const Error& e) {
    std::cout << "invalid: " << e.what() << "\n";
    return kExitValidationFailure;
  }
  Metrics m = metrics(plan, inst.costs);
  std::cout << "valid: cost=" << m.composite_cost << " makespan=" << m.makespan
            << " horizon=" << plan_horizon(plan) << "\n";
  return kExitOk;
}

int cmd_export_pddl(const std::string& instance_path, const std::string& domain_out,
                    const std::string& problem_out, bool costed,
                    const std::string& plan_in) {
  Instance inst = load_instance(instance_path);
  if (!domain_out.empty()) write_file(domain_out, emit_domain(costed));
  if (!problem_out.empty()) write_file(problem_out, emit_problem(inst, costed));
  if (domain_out.empty() && problem_out.empty() && plan_in.empty())
    std::cout << emit_problem(inst, costed);
  if (!plan_in.empty()) {
    Plan plan;
    try {
      plan = parse_plan_file(read_file(plan_in), inst);
    } catch (const Error& e) {
      std::cerr << "plan rejected: " << e.what() << "\n";
      return kExitValidationFailure;
    }
    fill_target_waits(plan, inst);
    Metrics m = metrics(plan, inst.costs);
    std::cout << "plan ok: cost=" << m.composite_cost << " makespan=" << m.makespan
              << " horizon=" << plan_horizon(plan) << "\n";
  }
  return kExitOk;
}

int cmd_bench(const std::string& out_dir, const std::string& suite, uint64_t seed,
              int scale, const std::string& ladders_path, double budget, int workers,
              const std::string& solvers_csv, int64_t limit) {
  SuiteParams params = build_suite(suite, seed, scale, ladders_path);
  BenchOptions opts;
  opts.budget_seconds = budget;
  opts.workers = workers;
  if (!solvers_csv.empty()) {
    std::string cur;
    for (char c : solvers_csv + ",") {
      if (c == ',') {
        if (!cur.empty()) opts.solvers.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    for (const std::string& s : opts.solvers)
      if (std::find(known_solvers().begin(), known_solvers().end(), s) ==
          known_solvers().end())
        throw Error(ErrorCode::parameter_error, "unknown solver '" + s + "'");
  }
  std::vector<Instance> instances;
  for_each_instance(params, [&](Instance&& inst) {
    if (limit <= 0 || static_cast<int64_t>(instances.size()) < limit)
      instances.push_back(std::move(inst));
  });
  if (limit > 0 && static_cast<int64_t>(instances.size()) > limit)
    instances.resize(limit);

  std::vector<RunRecord> records;
  const size_t chunk = 25;
  for (size_t at = 0; at < instances.size(); at += chunk) {
    std::vector<Instance> slice(
        instances.begin() + at,
        instances.begin() + std::min(instances.size(), at + chunk));
    std::vector<RunRecord> part = run_suite(slice, opts);
    records.insert(records.end(), part.begin(), part.end());
    std::cerr << "ran " << std::min(instances.size(), at + chunk) << "/"
              << instances.size() << " instances\n";
  }
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "records.csv").string(), records_to_csv(records));
  Report rep = aggregate(records);
  write_file((fs::path(out_dir) / "summary.json").string(), report_to_json(rep));
  for (const std::string& s : rep.solvers) {
    auto it = rep.groups.at("all").find(s);
    if (it == rep.groups.at("all").end()) continue;
    std::cout << s << ": " << it->second.successes << "/" << it->second.runs
              << " solved";
    if (it->second.ratios_reported)
      std::cout << ", cost ratio " << it->second.cost_ratio_mean;
    std::cout << "\n";
  }
  std::cout << "reports written to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block rearrangement solver toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a benchmark suite as JSON files");
  std::string gen_out = "instances";
  std::string gen_suite = "main";
  std::string gen_ladders;
  uint64_t gen_seed = 0;
  int gen_scale = 0;
  int64_t gen_limit = 0;
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_option("--suite", gen_suite, "main (B/R1/R2) or per-target");
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--scale", gen_scale, "Keep only the first N grid sizes (0 = all)");
  gen->add_option("--ladders", gen_ladders, "Ladder manifest JSON (default built-in)");
  gen->add_option("--limit", gen_limit, "Stop after N instances (0 = no limit)");

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver on one instance");
  std::string solve_instance, solve_plan_out;
  std::string solve_solver = "mapf";
  double solve_budget = 10.0;
  bool solve_json = false;
  solve->add_option("--instance", solve_instance, "Instance JSON file")->required();
  solve->add_option("--solver", solve_solver, "config|priority|greedy|mapf|pddl-export");
  solve->add_option("--budget", solve_budget, "Wall-clock budget in seconds");
  solve->add_option("--plan-out", solve_plan_out, "Write the plan text here");
  solve->add_flag("--json", solve_json, "Print the result as JSON");

  // validate
  auto* val = app.add_subcommand("validate", "Check a plan file against an instance");
  std::string val_instance, val_plan;
  val->add_option("--instance", val_instance, "Instance JSON file")->required();
  val->add_option("--plan", val_plan, "Plan text file")->required();

  // export-pddl
  auto* exp = app.add_subcommand("export-pddl", "Emit PDDL files / import a plan");
  std::string exp_instance, exp_domain, exp_problem, exp_plan_in;
  bool exp_costed = false;
  exp->add_option("--instance", exp_instance, "Instance JSON file")->required();
  exp->add_option("--domain-out", exp_domain, "Write the domain file here");
  exp->add_option("--problem-out", exp_problem, "Write the problem file here");
  exp->add_flag("--costed", exp_costed, "Emit the total-cost tracking variant");
  exp->add_option("--plan-in", exp_plan_in, "Parse and validate a planner's plan");

  // bench
  auto* bench = app.add_subcommand("bench", "Run solvers over a suite, emit reports");
  std::string bench_out = "bench-out";
  std::string bench_suite = "main";
  std::string bench_ladders, bench_solvers;
  uint64_t bench_seed = 0;
  int bench_scale = 1;
  double bench_budget = 10.0;
  int bench_workers = 1;
  int64_t bench_limit = 0;
  bench->add_option("--out", bench_out, "Report directory");
  bench->add_option("--suite", bench_suite, "main (B/R1/R2) or per-target");
  bench->add_option("--seed", bench_seed, "Master seed");
  bench->add_option("--scale", bench_scale,
                    "Keep only the first N grid sizes (0 = all; default 1)");
  bench->add_option("--budget", bench_budget, "Per-run budget in seconds");
  bench->add_option("--workers", bench_workers, "Worker threads");
  bench->add_option("--solvers", bench_solvers, "Comma-separated solver list");
  bench->add_option("--ladders", bench_ladders, "Ladder manifest JSON");
  bench->add_option("--limit", bench_limit, "Run only the first N instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_out, gen_suite, gen_seed, gen_scale, gen_ladders, gen_limit);
    if (solve->parsed())
      return cmd_solve(solve_instance, solve_solver, solve_budget, solve_plan_out,
                       solve_json);
    if (val->parsed()) return cmd_validate(val_instance, val_plan);
    if (exp->parsed())
      return cmd_export_pddl(exp_instance, exp_domain, exp_problem, exp_costed,
                             exp_plan_in);
    if (bench->parsed())
      return cmd_bench(bench_out, bench_suite, bench_seed, bench_scale, bench_ladders,
                       bench_budget, bench_workers, bench_solvers, bench_limit);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
