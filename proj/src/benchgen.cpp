#include "brap/benchgen.hpp"

#include <algorithm>
#include <cctype>

#include "brap/error.hpp"
#include "brap/rng.hpp"
#include "json.hpp"

namespace brap {

using nlohmann::json;

std::string to_string(GoalType g) {
  switch (g) {
    case GoalType::B: return "B";
    case GoalType::R1: return "R1";
    case GoalType::R2: return "R2";
    case GoalType::PerTarget5: return "P5";
  }
  return "?";
}

std::optional<GoalType> goal_type_from_string(const std::string& s) {
  std::string up;
  for (char c : s) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "B") return GoalType::B;
  if (up == "R1") return GoalType::R1;
  if (up == "R2") return GoalType::R2;
  if (up == "P5" || up == "PT5" || up == "PERTARGET5") return GoalType::PerTarget5;
  return std::nullopt;
}

std::vector<GridSpec> default_ladders() {
  return {
      {4, 10, {1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 6, 8, 10}},
      {6, 10, {1, 2, 3, 5, 6, 8}, {1, 2, 3, 5, 6, 8, 12, 15}},
      {8, 10, {1, 2, 4, 6, 8, 10}, {1, 2, 4, 6, 8, 10, 16, 20}},
      {10, 10, {1, 3, 5, 8, 10, 13}, {1, 3, 5, 8, 10, 13, 20, 25}},
      {20, 20, {1, 8, 10, 16, 20, 24, 30, 32, 40, 50},
       {1, 10, 20, 30, 40, 50, 60, 80, 100}},
      {40, 40, {1, 16, 32, 40, 48, 64, 80, 120, 160, 200},
       {1, 40, 80, 120, 160, 200, 240, 320, 400}},
      {80, 80, {1, 32, 64, 96, 128, 160, 320, 480, 640, 800},
       {1, 160, 320, 480, 640, 800, 960, 1280, 1600}},
  };
}

std::vector<GridSpec> ladders_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("ladder manifest: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("grids") || !doc["grids"].is_array())
    throw Error(ErrorCode::parse_error, "ladder manifest: missing \"grids\" array");
  std::vector<GridSpec> out;
  for (const json& g : doc["grids"]) {
    GridSpec spec;
    try {
      spec.height = g.at("height").get<int>();
      spec.width = g.at("width").get<int>();
      spec.targets = g.at("targets").get<std::vector<int>>();
      spec.blanks = g.at("blanks").get<std::vector<int>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse_error, std::string("ladder manifest: ") + e.what());
    }
    if (spec.height < 1 || spec.width < 1 || spec.targets.empty() || spec.blanks.empty())
      throw Error(ErrorCode::parse_error, "ladder manifest: empty or invalid row");
    out.push_back(std::move(spec));
  }
  if (out.empty()) throw Error(ErrorCode::parse_error, "ladder manifest: no rows");
  return out;
}

std::string ladders_to_json(const std::vector<GridSpec>& grids) {
  json rows = json::array();
  for (const GridSpec& g : grids)
    rows.push_back(json{{"height", g.height},
                        {"width", g.width},
                        {"targets", g.targets},
                        {"blanks", g.blanks}});
  return json{{"grids", rows}}.dump(2) + "\n";
}

uint64_t instance_seed(const InstanceParams& p, int case_index) {
  uint64_t s = p.master_seed;
  s = mix64(s, static_cast<uint64_t>(p.height));
  s = mix64(s, static_cast<uint64_t>(p.width));
  s = mix64(s, static_cast<uint64_t>(p.targets));
  s = mix64(s, static_cast<uint64_t>(p.blanks));
  s = mix64(s, static_cast<uint64_t>(p.goal));
  s = mix64(s, static_cast<uint64_t>(case_index));
  return s;
}

namespace {

std::vector<Vertex> obstacle_square(int h, int w) {
  int side = std::min(h, w) / 5;
  std::vector<Vertex> out;
  for (int r = h - side; r < h; ++r)
    for (int c = w - side; c < w; ++c) out.push_back({r, c});
  return out;
}

}  // namespace

Instance generate_instance(const InstanceParams& p, int case_index) {
  if (p.height < 1 || p.width < 1)
    throw Error(ErrorCode::parameter_error, "grid dimensions must be positive");
  if (p.targets < 1) throw Error(ErrorCode::parameter_error, "need at least one target");
  if (p.blanks < 1) throw Error(ErrorCode::parameter_error, "need at least one blank");
  if (case_index < 0) throw Error(ErrorCode::parameter_error, "negative case index");

  GridMap grid(p.height, p.width, obstacle_square(p.height, p.width));
  std::vector<Vertex> free_cells;  // row-major, obstacles excluded
  for (int r = 0; r < p.height; ++r)
    for (int c = 0; c < p.width; ++c)
      if (grid.passable({r, c})) free_cells.push_back({r, c});
  const int n_free = static_cast<int>(free_cells.size());

  if (p.targets + p.blanks > n_free)
    throw Error(ErrorCode::parameter_error,
                "targets + blanks exceed the " + std::to_string(n_free) +
                    " non-obstacle vertices");
  if (p.goal == GoalType::R2 && 2 * p.targets > n_free)
    throw Error(ErrorCode::parameter_error,
                "R2 needs twice as many goal candidates as targets");
  if (p.goal == GoalType::PerTarget5 && n_free < 5)
    throw Error(ErrorCode::parameter_error,
                "per-target goals need at least five non-obstacle vertices");

  Rng rng(instance_seed(p, case_index));
  std::vector<Vertex> targets = rng.sample(free_cells, p.targets);
  std::vector<char> taken(grid.size(), 0);
  for (const Vertex& v : targets) taken[grid.index(v)] = 1;
  std::vector<Vertex> rest;
  rest.reserve(free_cells.size() - targets.size());
  for (const Vertex& v : free_cells)
    if (!taken[grid.index(v)]) rest.push_back(v);
  std::vector<Vertex> blanks = rng.sample(rest, p.blanks);
  for (const Vertex& v : blanks) taken[grid.index(v)] = 1;
  std::vector<Vertex> nontargets;  // row-major: everything not target/blank
  nontargets.reserve(rest.size() - blanks.size());
  for (const Vertex& v : rest)
    if (!taken[grid.index(v)]) nontargets.push_back(v);

  Instance inst;
  inst.grid = std::move(grid);
  inst.start = Configuration(inst.grid, targets, nontargets);
  switch (p.goal) {
    case GoalType::B:
      for (const Vertex& v : free_cells)
        if (v.row == 0 || v.row == p.height - 1 || v.col == 0 || v.col == p.width - 1)
          inst.goals.shared.push_back(v);
      break;
    case GoalType::R1:
      inst.goals.shared = rng.sample(free_cells, p.targets);
      break;
    case GoalType::R2:
      inst.goals.shared = rng.sample(free_cells, 2 * p.targets);
      break;
    case GoalType::PerTarget5:
      inst.goals.per_target = true;
      for (int i = 0; i < p.targets; ++i)
        inst.goals.by_target[i] = rng.sample(free_cells, 5);
      break;
  }
  inst.label = "g" + std::to_string(p.height) + "x" + std::to_string(p.width) + "-t" +
               std::to_string(p.targets) + "-b" + std::to_string(p.blanks) + "-" +
               to_string(p.goal) + "-c" + std::to_string(case_index);
  inst.check();
  return inst;
}

void for_each_instance(const SuiteParams& params,
                       const std::function<void(Instance&&)>& fn) {
  size_t n_grids = params.grids.size();
  if (params.scale > 0) n_grids = std::min<size_t>(n_grids, params.scale);
  for (size_t gi = 0; gi < n_grids; ++gi) {
    const GridSpec& g = params.grids[gi];
    for (int t : g.targets)
      for (int b : g.blanks)
        for (GoalType goal : params.goal_types)
          for (int c = 0; c < params.cases_per_combo; ++c) {
            InstanceParams p{g.height, g.width, t, b, goal, params.master_seed};
            fn(generate_instance(p, c));
          }
  }
}

std::vector<Instance> generate_suite(const SuiteParams& params) {
  std::vector<Instance> out;
  out.reserve(static_cast<size_t>(suite_size(params)));
  for_each_instance(params, [&](Instance&& inst) { out.push_back(std::move(inst)); });
  return out;
}

int64_t suite_size(const SuiteParams& params) {
  size_t n_grids = params.grids.size();
  if (params.scale > 0) n_grids = std::min<size_t>(n_grids, params.scale);
  int64_t n = 0;
  for (size_t gi = 0; gi < n_grids; ++gi)
    n += static_cast<int64_t>(params.grids[gi].targets.size()) *
         static_cast<int64_t>(params.grids[gi].blanks.size());
  return n * static_cast<int64_t>(params.goal_types.size()) * params.cases_per_combo;
}

SuiteParams main_suite(uint64_t master_seed, int scale) {
  SuiteParams p;
  p.grids = default_ladders();
  p.goal_types = {GoalType::B, GoalType::R1, GoalType::R2};
  p.master_seed = master_seed;
  p.scale = scale;
  return p;
}

SuiteParams per_target_suite(uint64_t master_seed, int scale) {
  SuiteParams p;
  p.grids = default_ladders();
  p.goal_types = {GoalType::PerTarget5};
  p.master_seed = master_seed;
  p.scale = scale;
  return p;
}

}  // namespace brap
