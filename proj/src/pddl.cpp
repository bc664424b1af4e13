#include "brap/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "brap/error.hpp"

namespace brap {

namespace {

// The published listing, leading indentation normalized to four spaces per
// nesting level (other bytes, including the doubled space after
// :precondition, kept as printed).
constexpr const char* kDomainPlain = R"((define
    (domain block-rearrangement)
    (:requirements :strips :action-costs)
    (:predicates
        (tgt ?loc)
        (fre ?loc)
        (blo ?loc)
        (cmp ?loc)
        (goal ?loc)
        (adjacent ?loc1 ?loc2)
    )
    (:action slide_blo
        :parameters (?from ?to)
        :precondition  (and (blo ?from) (fre ?to) (adjacent ?from ?to))
        :effect (and
            (not (blo ?from))
            (blo ?to)
            (not (fre ?to))
            (fre ?from)
        )
    )
    (:action slide_tgt
        :parameters (?from ?to)
        :precondition  (and (tgt ?from) (fre ?to) (adjacent ?from ?to))
        :effect (and
            (not (tgt ?from))
            (tgt ?to)
            (not (fre ?to))
            (fre ?from)
            (cmp ?from)
            (not (cmp ?to))
        )
    )
    (:action complete
        :parameters (?loc)
        :precondition  (and (goal ?loc) (tgt ?loc))
        :effect (and
            (not (tgt ?loc))
            (cmp ?loc)
        )
    )
)
)";

// Extension, not part of the published listing: total-cost bookkeeping with
// the standard action prices (move 2, complete 2) wired into the effects.
constexpr const char* kDomainCosted = R"(; costed variant: total-cost tracking added; not part of the published listing
(define
    (domain block-rearrangement)
    (:requirements :strips :action-costs)
    (:functions
        (total-cost)
    )
    (:predicates
        (tgt ?loc)
        (fre ?loc)
        (blo ?loc)
        (cmp ?loc)
        (goal ?loc)
        (adjacent ?loc1 ?loc2)
    )
    (:action slide_blo
        :parameters (?from ?to)
        :precondition  (and (blo ?from) (fre ?to) (adjacent ?from ?to))
        :effect (and
            (not (blo ?from))
            (blo ?to)
            (not (fre ?to))
            (fre ?from)
            (increase (total-cost) 2)
        )
    )
    (:action slide_tgt
        :parameters (?from ?to)
        :precondition  (and (tgt ?from) (fre ?to) (adjacent ?from ?to))
        :effect (and
            (not (tgt ?from))
            (tgt ?to)
            (not (fre ?to))
            (fre ?from)
            (cmp ?from)
            (not (cmp ?to))
            (increase (total-cost) 2)
        )
    )
    (:action complete
        :parameters (?loc)
        :precondition  (and (goal ?loc) (tgt ?loc))
        :effect (and
            (not (tgt ?loc))
            (cmp ?loc)
            (increase (total-cost) 2)
        )
    )
)
)";

std::string node_name(const Vertex& v) {
  return "node-" + std::to_string(v.row) + "-" + std::to_string(v.col);
}

std::string sanitize_name(const std::string& label) {
  std::string out;
  for (char c : label)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'
                      ? c
                      : '-');
  return out.empty() ? "instance" : out;
}

}  // namespace

std::string emit_domain(bool costed) { return costed ? kDomainCosted : kDomainPlain; }

std::string emit_problem(const Instance& inst, bool costed) {
  if (inst.goals.per_target)
    throw Error(ErrorCode::unsupported_goal,
                "per-target goal sets cannot be expressed: the domain has a single "
                "anonymous goal predicate");
  const GridMap& grid = inst.grid;
  std::vector<Vertex> cells;  // row-major, obstacles excluded
  for (int r = 0; r < grid.height(); ++r)
    for (int c = 0; c < grid.width(); ++c)
      if (grid.passable({r, c})) cells.push_back({r, c});

  std::ostringstream out;
  out << "(define\n";
  out << "    (problem " << sanitize_name(inst.label) << ")\n";
  out << "    (:domain block-rearrangement)\n";
  out << "    (:objects\n";
  for (const Vertex& v : cells) out << "        " << node_name(v) << "\n";
  out << "    )\n";
  out << "    (:init\n";
  for (const Vertex& v : cells) {
    auto occ = inst.start.occupant(grid.index(v));
    if (occ && occ->kind == BlockKind::Target)
      out << "        (tgt " << node_name(v) << ")\n";
    else if (occ)
      out << "        (blo " << node_name(v) << ")\n";
    else
      out << "        (fre " << node_name(v) << ")\n";
  }
  for (const Vertex& v : cells) {
    auto occ = inst.start.occupant(grid.index(v));
    if (!occ || occ->kind != BlockKind::Target)
      out << "        (cmp " << node_name(v) << ")\n";
  }
  {
    std::vector<Vertex> goals = inst.goals.shared;
    std::sort(goals.begin(), goals.end());
    for (const Vertex& v : goals) out << "        (goal " << node_name(v) << ")\n";
  }
  for (const Vertex& v : cells)
    for (const Vertex& n : neighbors(grid, v))
      out << "        (adjacent " << node_name(v) << " " << node_name(n) << ")\n";
  if (costed) out << "        (= (total-cost) 0)\n";
  out << "    )\n";
  out << "    (:goal (and\n";
  for (const Vertex& v : cells) out << "        (cmp " << node_name(v) << ")\n";
  out << "    ))\n";
  if (costed) out << "    (:metric minimize (total-cost))\n";
  out << ")\n";
  return out.str();
}

namespace {

Vertex parse_node(const std::string& tok, const GridMap& grid, int line_no) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::parse_error,
                "line " + std::to_string(line_no) + ": " + why + " '" + tok + "'");
  };
  if (tok.rfind("node-", 0) != 0) fail("expected a node name, got");
  int r = 0, c = 0;
  char extra = 0;
  if (std::sscanf(tok.c_str(), "node-%d-%d%c", &r, &c, &extra) != 2 || r < 0 || c < 0)
    fail("malformed node name");
  Vertex v{r, c};
  if (r >= grid.height() || c >= grid.width()) fail("node outside the grid:");
  if (!grid.passable(v)) fail("node names an obstacle vertex:");
  return v;
}

}  // namespace

Plan parse_plan_file(const std::string& text, const Instance& inst) {
  const GridMap& grid = inst.grid;
  Configuration cfg = inst.start;
  Plan plan;
  int t = 0, line_no = 0;
  std::istringstream in(text);
  std::string line;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped;
    for (char c : line) {
      if (c == ';') break;  // comment runs to end of line
      if (c != '(' && c != ')') stripped.push_back(c);
    }
    std::istringstream ls(stripped);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    std::string& name = tok[0];
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (name == "slide_tgt" || name == "slide_blo") {
      if (tok.size() != 3) fail("expected two node arguments for " + name);
      Vertex from = parse_node(tok[1], grid, line_no);
      Vertex to = parse_node(tok[2], grid, line_no);
      auto nbrs = neighbors(grid, from);
      if (std::find(nbrs.begin(), nbrs.end(), to) == nbrs.end())
        fail("move between non-adjacent vertices");
      auto occ = cfg.occupant(grid.index(from));
      bool want_target = name == "slide_tgt";
      if (!occ || (occ->kind == BlockKind::Target) != want_target)
        fail(want_target ? "no target block at the source vertex"
                         : "no non-target block at the source vertex");
      if (!cfg.is_free(grid.index(to))) fail("destination vertex is not free");
      plan.add(Action::move(*occ, t, from, to));
      cfg.move_block(grid, *occ, from, to);
    } else if (name == "complete") {
      if (tok.size() != 2) fail("expected one node argument for complete");
      Vertex at = parse_node(tok[1], grid, line_no);
      auto occ = cfg.occupant(grid.index(at));
      if (!occ || occ->kind != BlockKind::Target)
        fail("no target block at the completion vertex");
      const auto gs = inst.goals.goals_for(occ->id);
      if (std::find(gs.begin(), gs.end(), at) == gs.end())
        fail("completion vertex is not a goal vertex");
      plan.add(Action::complete(*occ, t, at));
      cfg.complete_target(grid, occ->id, at);
    } else {
      fail("unknown action '" + name + "'");
    }
    ++t;
  }
  validate(plan, inst);
  return plan;
}

}  // namespace brap
