#pragma once

#include <string>

#include "brap/model.hpp"
#include "brap/plan.hpp"

// Serialization: Instance JSON documents, plan text and plan JSON documents.
namespace brap {

// Instance document. Keys: height, width, obstacles, targets, nontargets,
// goals ({"shared": ...} or {"per_target": ...}), costs, label.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

// Plan text: one action per line,
//   t <int> <move|wait|complete> <T|N><id> <r,c> [-> <r,c>]
// '#' starts a comment; blank lines are skipped.
std::string plan_to_text(const Plan& P);
Plan plan_from_text(const std::string& text);

// Plan document form mirroring the instance format.
std::string plan_to_json(const Plan& P);
Plan plan_from_json(const std::string& text);

// Small file helpers shared by the CLI and tests.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace brap
