#include "brap/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <thread>

#include "brap/error.hpp"
#include "brap/io.hpp"
#include "brap/pddl.hpp"
#include "brap/solver_config.hpp"
#include "brap/solver_greedy.hpp"
#include "brap/solver_lacam.hpp"
#include "brap/solver_priority.hpp"
#include "json.hpp"

namespace brap {

using nlohmann::json;

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Success: return "success";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::Infeasible: return "infeasible";
    case RunStatus::Failure: return "failure";
    case RunStatus::Error: return "error";
    case RunStatus::Skipped: return "skipped";
  }
  return "?";
}

const std::vector<std::string>& known_solvers() {
  static const std::vector<std::string> names = {"config", "priority", "greedy",
                                                 "mapf", "pddl-export"};
  return names;
}

namespace {

RunStatus map_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::Success: return RunStatus::Success;
    case SolveStatus::Timeout: return RunStatus::Timeout;
    case SolveStatus::Infeasible: return RunStatus::Infeasible;
    case SolveStatus::Failure: return RunStatus::Failure;
  }
  return RunStatus::Error;
}

void record_success(RunRecord& rec, const Instance& inst, const Plan& plan,
                    double first_cost, double final_cost, double makespan,
                    double first_time_ms) {
  validate(plan, inst);  // no unvalidated success is ever recorded
  rec.status = RunStatus::Success;
  rec.first_cost = first_cost;
  rec.final_cost = final_cost;
  rec.final_makespan = makespan;
  rec.first_time_ms = first_time_ms;
  rec.horizon = plan_horizon(plan);
}

// Shells out to $BRAP_PDDL_PLANNER <domain> <problem> <plan-out>, then imports
// and prices the produced plan.
void run_pddl_export(RunRecord& rec, const Instance& inst) {
  const char* cmd = std::getenv("BRAP_PDDL_PLANNER");
  if (cmd == nullptr || *cmd == '\0') {
    rec.status = RunStatus::Skipped;
    rec.detail = "BRAP_PDDL_PLANNER is not set; files can still be produced "
                 "with the export-pddl command";
    return;
  }
  static std::atomic<uint64_t> serial{0};
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() /
                 ("brap-pddl-" + std::to_string(serial.fetch_add(1)) + "-" +
                  std::to_string(static_cast<unsigned long>(::getpid())));
  fs::create_directories(dir);
  fs::path domain = dir / "domain.pddl";
  fs::path problem = dir / "problem.pddl";
  fs::path plan_out = dir / "plan.txt";
  Deadline timer(0.0);
  try {
    write_file(domain.string(), emit_domain());
    write_file(problem.string(), emit_problem(inst));
    std::string invocation = std::string(cmd) + " '" + domain.string() + "' '" +
                             problem.string() + "' '" + plan_out.string() + "'";
    int exit_code = std::system(invocation.c_str());
    if (exit_code != 0) {
      rec.status = RunStatus::Error;
      rec.detail = "planner command exited with status " + std::to_string(exit_code);
    } else {
      Plan plan = parse_plan_file(read_file(plan_out.string()), inst);
      fill_target_waits(plan, inst);
      Metrics m = metrics(plan, inst.costs);
      record_success(rec, inst, plan, m.composite_cost, m.composite_cost,
                     m.makespan, timer.elapsed_ms());
    }
  } catch (const std::exception& e) {
    rec.status = RunStatus::Error;
    rec.detail = e.what();
  }
  std::error_code ignored;
  fs::remove_all(dir, ignored);
}

}  // namespace

RunRecord run_with_budget(const Instance& inst, const std::string& solver,
                          double budget_seconds) {
  RunRecord rec;
  rec.label = inst.label;
  rec.solver = solver;
  try {
    if (solver == "pddl-export") {
      run_pddl_export(rec, inst);
      return rec;
    }
    SolveResult r;
    if (solver == "config")
      r = solve_astar(inst, budget_seconds);
    else if (solver == "priority")
      r = solve_priority(inst, budget_seconds);
    else if (solver == "greedy")
      r = solve_greedy(inst, budget_seconds);
    else if (solver == "mapf")
      r = lacam_solve(inst, budget_seconds);
    else
      throw Error(ErrorCode::parameter_error, "unknown solver '" + solver + "'");
    if (r.success()) {
      record_success(rec, inst, r.plan, r.first_cost, r.final_cost, r.makespan,
                     r.first_time_ms);
    } else {
      rec.status = map_status(r.status);
      rec.detail = r.detail;
    }
  } catch (const std::exception& e) {
    rec.status = RunStatus::Error;
    rec.detail = e.what();
  }
  return rec;
}

std::vector<RunRecord> run_suite(const std::vector<Instance>& instances,
                                 const BenchOptions& opts) {
  const std::vector<std::string>& solvers =
      opts.solvers.empty() ? known_solvers() : opts.solvers;
  const size_t per_instance = solvers.size();
  std::vector<RunRecord> records(instances.size() * per_instance);
  auto run_instance = [&](size_t i) {
    for (size_t k = 0; k < per_instance; ++k)
      records[i * per_instance + k] =
          run_with_budget(instances[i], solvers[k], opts.budget_seconds);
  };
  int workers = std::max(1, opts.workers);
  if (workers == 1 || instances.size() <= 1) {
    for (size_t i = 0; i < instances.size(); ++i) run_instance(i);
    return records;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < instances.size(); i = next.fetch_add(1))
        run_instance(i);
    });
  for (std::thread& t : pool) t.join();
  return records;
}

std::string label_dimension(const std::string& label, const std::string& dim) {
  std::vector<std::string> tok;
  std::string cur;
  for (char c : label) {
    if (c == '-') {
      tok.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  tok.push_back(cur);
  if (tok.size() != 5 || tok[0].size() < 2 || tok[0][0] != 'g' ||
      tok[1].size() < 2 || tok[1][0] != 't' || tok[2].size() < 2 ||
      tok[2][0] != 'b' || tok[4].size() < 2 || tok[4][0] != 'c')
    return "";
  if (dim == "grid") return tok[0].substr(1);
  if (dim == "targets") return tok[1].substr(1);
  if (dim == "blanks") return tok[2].substr(1);
  if (dim == "goal") return tok[3];
  if (dim == "case") return tok[4].substr(1);
  return "";
}

namespace {

// Values are sorted before summation so the statistics are exactly
// permutation-invariant over the input records.
struct MeanStd {
  std::vector<double> xs;
  void add(double x) { xs.push_back(x); }
  void settle() { std::sort(xs.begin(), xs.end()); }
  double mean() const {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  }
  double stddev() const {
    if (xs.empty()) return 0.0;
    double m = mean(), s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size()));
  }
};

}  // namespace

Report aggregate(const std::vector<RunRecord>& records,
                 const std::vector<std::string>& groupings) {
  Report rep;
  // column order: known solvers first, then any synthetic names by appearance
  for (const std::string& s : known_solvers())
    for (const RunRecord& r : records)
      if (r.solver == s) {
        rep.solvers.push_back(s);
        break;
      }
  {
    std::set<std::string> extra;
    for (const RunRecord& r : records)
      if (std::find(rep.solvers.begin(), rep.solvers.end(), r.solver) ==
          rep.solvers.end())
        extra.insert(r.solver);
    rep.solvers.insert(rep.solvers.end(), extra.begin(), extra.end());
  }

  // per-instance baselines over successful runs
  std::map<std::string, double> base_cost, base_makespan;
  for (const RunRecord& r : records) {
    if (r.status != RunStatus::Success) continue;
    auto [it, fresh] = base_cost.emplace(r.label, r.final_cost);
    if (!fresh) it->second = std::min(it->second, r.final_cost);
    auto [mt, mfresh] = base_makespan.emplace(r.label, r.final_makespan);
    if (!mfresh) mt->second = std::min(mt->second, r.final_makespan);
  }

  struct Acc {
    int runs = 0, successes = 0;
    MeanStd cost, makespan, first_time;
    double first_time_max = 0.0;
  };
  std::map<std::string, std::map<std::string, Acc>> acc;
  auto groups_of = [&](const RunRecord& r) {
    std::vector<std::string> gs = {"all"};
    for (const std::string& dim : groupings) {
      std::string v = label_dimension(r.label, dim);
      if (!v.empty()) gs.push_back(dim + ":" + v);
    }
    return gs;
  };
  for (const RunRecord& r : records) {
    for (const std::string& g : groups_of(r)) {
      Acc& a = acc[g][r.solver];
      ++a.runs;
      if (r.status != RunStatus::Success) continue;
      ++a.successes;
      double bc = base_cost.at(r.label), bm = base_makespan.at(r.label);
      if (bc > 0.0) a.cost.add(r.final_cost / bc);
      if (bm > 0.0) a.makespan.add(r.final_makespan / bm);
      a.first_time.add(r.first_time_ms);
      a.first_time_max = std::max(a.first_time_max, r.first_time_ms);
    }
  }
  for (auto& [group, by_solver] : acc)
    for (auto& [solver, a] : by_solver) {
      a.cost.settle();
      a.makespan.settle();
      a.first_time.settle();
      SolverGroupStats s;
      s.runs = a.runs;
      s.successes = a.successes;
      s.success_rate = a.runs > 0 ? 100.0 * a.successes / a.runs : 0.0;
      s.ratios_reported = a.successes > 0 && s.success_rate >= 20.0;
      if (s.ratios_reported) {
        s.cost_ratio_mean = a.cost.mean();
        s.cost_ratio_std = a.cost.stddev();
        s.makespan_ratio_mean = a.makespan.mean();
        s.makespan_ratio_std = a.makespan.stddev();
      }
      if (a.successes > 0) {
        s.first_time_mean_ms = a.first_time.mean();
        s.first_time_max_ms = a.first_time_max;
      }
      rep.groups[group][solver] = s;
    }

  // pairwise ratios over co-solvable instances
  std::map<std::string, std::map<std::string, const RunRecord*>> by_label;
  for (const RunRecord& r : records)
    if (r.status == RunStatus::Success) by_label[r.label][r.solver] = &r;
  for (const std::string& a : rep.solvers)
    for (const std::string& b : rep.solvers) {
      MeanStd cost, mk;
      int n = 0;
      for (const auto& [label, by_solver] : by_label) {
        auto ia = by_solver.find(a);
        auto ib = by_solver.find(b);
        if (ia == by_solver.end() || ib == by_solver.end()) continue;
        if (ib->second->final_cost > 0.0)
          cost.add(ia->second->final_cost / ib->second->final_cost);
        if (ib->second->final_makespan > 0.0)
          mk.add(ia->second->final_makespan / ib->second->final_makespan);
        ++n;
      }
      cost.settle();
      mk.settle();
      rep.pairwise_count[a][b] = n;
      rep.pairwise_cost[a][b] = cost.mean();
      rep.pairwise_makespan[a][b] = mk.mean();
    }
  return rep;
}

const char* const kRecordsCsvHeader =
    "label,solver,status,first_time_ms,first_cost,final_cost,final_makespan,"
    "horizon,detail";

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << kRecordsCsvHeader << "\n";
  for (const RunRecord& r : records)
    out << csv_quote(r.label) << ',' << csv_quote(r.solver) << ','
        << run_status_name(r.status) << ',' << num(r.first_time_ms) << ','
        << num(r.first_cost) << ',' << num(r.final_cost) << ','
        << num(r.final_makespan) << ',' << r.horizon << ',' << csv_quote(r.detail)
        << "\n";
  return out.str();
}

std::string report_to_json(const Report& report) {
  json doc;
  doc["csv_version"] = kRecordsCsvVersion;
  doc["solvers"] = report.solvers;
  json groups = json::object();
  for (const auto& [group, by_solver] : report.groups) {
    json g = json::object();
    for (const auto& [solver, s] : by_solver) {
      json row{{"runs", s.runs},
               {"successes", s.successes},
               {"success_rate", s.success_rate},
               {"first_time_mean_ms", s.first_time_mean_ms},
               {"first_time_max_ms", s.first_time_max_ms}};
      if (s.ratios_reported) {
        row["cost_ratio_mean"] = s.cost_ratio_mean;
        row["cost_ratio_std"] = s.cost_ratio_std;
        row["makespan_ratio_mean"] = s.makespan_ratio_mean;
        row["makespan_ratio_std"] = s.makespan_ratio_std;
      } else {
        row["cost_ratio_mean"] = nullptr;  // suppressed below 20% success
        row["cost_ratio_std"] = nullptr;
        row["makespan_ratio_mean"] = nullptr;
        row["makespan_ratio_std"] = nullptr;
      }
      g[solver] = std::move(row);
    }
    groups[group] = std::move(g);
  }
  doc["groups"] = std::move(groups);
  doc["pairwise_cost"] = report.pairwise_cost;
  doc["pairwise_makespan"] = report.pairwise_makespan;
  doc["pairwise_count"] = report.pairwise_count;
  return doc.dump(2) + "\n";
}

}  // namespace brap
