#pragma once

#include <string>
#include <vector>

#include "brap/model.hpp"

// ASCII instance builder for tests. Cell legend:
//   '.' free   '#' obstacle   'T' target   'N' non-target   'g' free goal
//   't' target standing on a goal   'n' non-target standing on a goal
// Targets and non-targets are numbered in reading order; goals are shared.
inline brap::Instance grid_instance(const std::vector<std::string>& rows,
                                    brap::CostModel costs = {}) {
  using namespace brap;
  int h = static_cast<int>(rows.size());
  int w = static_cast<int>(rows.front().size());
  std::vector<Vertex> obstacles, targets, nontargets, goals;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      Vertex v{r, c};
      switch (rows[r][c]) {
        case '#': obstacles.push_back(v); break;
        case 'T': targets.push_back(v); break;
        case 'N': nontargets.push_back(v); break;
        case 'g': goals.push_back(v); break;
        case 't': targets.push_back(v); goals.push_back(v); break;
        case 'n': nontargets.push_back(v); goals.push_back(v); break;
        case '.': break;
        default: throw Error(ErrorCode::parameter_error, "bad fixture cell");
      }
    }
  Instance inst;
  inst.grid = GridMap(h, w, obstacles);
  inst.start = Configuration(inst.grid, targets, nontargets);
  inst.goals.shared = goals;
  inst.costs = costs;
  inst.label = "fixture";
  return inst;
}
