#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "brap/model.hpp"

// Deterministic benchmark-suite generation: dense grids with a square
// obstacle region in the bottom-right corner, uniformly sampled target and
// blank cells, every remaining cell filled with a non-target block, and four
// goal-selection schemes. Instances are a pure function of the parameters, a
// master seed, and a case index, so reruns are byte-identical.
namespace brap {

enum class GoalType {
  B,           // every non-obstacle boundary vertex
  R1,          // uniform sample, as many goals as targets
  R2,          // uniform sample, twice as many goals as targets
  PerTarget5,  // five independently sampled goal vertices per target
};

std::string to_string(GoalType g);
std::optional<GoalType> goal_type_from_string(const std::string& s);

// One manifest row: a grid size plus its target-count and blank-count ladders.
struct GridSpec {
  int height = 0;
  int width = 0;
  std::vector<int> targets;
  std::vector<int> blanks;
};

// Everything that pins down a single instance except its case index.
struct InstanceParams {
  int height = 0;
  int width = 0;
  int targets = 0;
  int blanks = 0;
  GoalType goal = GoalType::B;
  uint64_t master_seed = 0;
};

// A full suite: ladder rows crossed with goal types, `cases_per_combo`
// instances each. `scale` > 0 keeps only the first `scale` manifest rows
// (the rows are ordered small to large) for desk-scale runs.
struct SuiteParams {
  std::vector<GridSpec> grids;
  std::vector<GoalType> goal_types;
  int cases_per_combo = 10;
  uint64_t master_seed = 0;
  int scale = 0;
};

// Ladder manifest: the compiled-in rows, and the JSON form kept under data/.
std::vector<GridSpec> default_ladders();
std::vector<GridSpec> ladders_from_json(const std::string& text);
std::string ladders_to_json(const std::vector<GridSpec>& grids);

// Stated seed chain: master seed mixed with height, width, targets, blanks,
// goal-type code, and case index, in that order, via mix64.
uint64_t instance_seed(const InstanceParams& p, int case_index);

// Builds one instance. Throws parameter_error when the request cannot fit
// (no target or blank, or more sampled cells than non-obstacle vertices).
Instance generate_instance(const InstanceParams& p, int case_index);

// Streams every instance of the suite in a fixed order (grid row, target
// count, blank count, goal type, case index) without holding them all.
void for_each_instance(const SuiteParams& params,
                       const std::function<void(Instance&&)>& fn);

// Materialized form of for_each_instance, for desk-scale suites.
std::vector<Instance> generate_suite(const SuiteParams& params);

// Number of instances for_each_instance will produce.
int64_t suite_size(const SuiteParams& params);

// The two published protocols: shared-goal main suite (B, R1, R2) and the
// per-target-goal suite (PerTarget5), both 10 cases per combination.
SuiteParams main_suite(uint64_t master_seed, int scale = 0);
SuiteParams per_target_suite(uint64_t master_seed, int scale = 0);

}  // namespace brap
