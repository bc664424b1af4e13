#include "brap/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace brap {

using nlohmann::json;

namespace {

json vertex_json(Vertex v) { return json::array({v.row, v.col}); }

Vertex vertex_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer())
    throw Error(ErrorCode::parse_error, "vertex must be [row, col]");
  return {j[0].get<int>(), j[1].get<int>()};
}

std::vector<Vertex> vertices_from(const json& j, const char* what) {
  if (!j.is_array())
    throw Error(ErrorCode::parse_error, std::string(what) + " must be a list");
  std::vector<Vertex> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(vertex_from(e));
  return out;
}

// Blocks listed as {id, start}; ids must cover 0..n-1 exactly.
std::vector<Vertex> starts_from(const json& j, const char* what) {
  if (!j.is_array())
    throw Error(ErrorCode::parse_error, std::string(what) + " must be a list");
  std::vector<Vertex> out(j.size());
  std::vector<bool> seen(j.size(), false);
  for (const auto& e : j) {
    if (!e.contains("id") || !e.contains("start"))
      throw Error(ErrorCode::parse_error,
                  std::string(what) + " entries need id and start");
    int id = e["id"].get<int>();
    if (id < 0 || id >= static_cast<int>(out.size()) || seen[id])
      throw Error(ErrorCode::parse_error,
                  std::string(what) + " ids must cover 0..n-1 exactly");
    seen[id] = true;
    out[id] = vertex_from(e["start"]);
  }
  return out;
}

json parse_document(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::parse_error, "malformed JSON document");
  return j;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["height"] = inst.grid.height();
  j["width"] = inst.grid.width();
  json obs = json::array();
  for (Vertex v : inst.grid.obstacles()) obs.push_back(vertex_json(v));
  j["obstacles"] = std::move(obs);
  json tgts = json::array();
  for (int i = 0; i < inst.num_targets(); ++i) {
    Vertex v = *inst.start.position({i, BlockKind::Target});
    tgts.push_back({{"id", i}, {"start", vertex_json(v)}});
  }
  j["targets"] = std::move(tgts);
  json nons = json::array();
  for (int i = 0; i < inst.num_nontargets(); ++i) {
    Vertex v = *inst.start.position({i, BlockKind::NonTarget});
    nons.push_back({{"id", i}, {"start", vertex_json(v)}});
  }
  j["nontargets"] = std::move(nons);
  if (inst.goals.per_target) {
    json per = json::object();
    for (const auto& [id, gs] : inst.goals.by_target) {
      json list = json::array();
      for (Vertex v : gs) list.push_back(vertex_json(v));
      per[std::to_string(id)] = std::move(list);
    }
    j["goals"] = {{"per_target", std::move(per)}};
  } else {
    json list = json::array();
    for (Vertex v : inst.goals.shared) list.push_back(vertex_json(v));
    j["goals"] = {{"shared", std::move(list)}};
  }
  j["costs"] = {{"move_tgt", inst.costs.move_tgt},
                {"wait_tgt", inst.costs.wait_tgt},
                {"complete_tgt", inst.costs.complete_tgt},
                {"move_non", inst.costs.move_non},
                {"wait_non", inst.costs.wait_non}};
  j["label"] = inst.label;
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json j = parse_document(text);
  for (const char* key : {"height", "width", "targets", "goals"})
    if (!j.contains(key))
      throw Error(ErrorCode::parse_error, std::string("missing key: ") + key);
  Instance inst;
  std::vector<Vertex> obstacles;
  if (j.contains("obstacles")) obstacles = vertices_from(j["obstacles"], "obstacles");
  inst.grid = GridMap(j["height"].get<int>(), j["width"].get<int>(), obstacles);
  std::vector<Vertex> tgt = starts_from(j["targets"], "targets");
  std::vector<Vertex> non;
  if (j.contains("nontargets")) non = starts_from(j["nontargets"], "nontargets");
  inst.start = Configuration(inst.grid, tgt, non);
  const json& goals = j["goals"];
  if (goals.contains("shared")) {
    inst.goals.per_target = false;
    inst.goals.shared = vertices_from(goals["shared"], "goals.shared");
  } else if (goals.contains("per_target")) {
    inst.goals.per_target = true;
    for (const auto& [key, value] : goals["per_target"].items())
      inst.goals.by_target[std::stoi(key)] = vertices_from(value, "goals.per_target");
  } else {
    throw Error(ErrorCode::parse_error, "goals needs shared or per_target");
  }
  if (j.contains("costs")) {
    const json& c = j["costs"];
    auto get = [&](const char* key, double fallback) {
      return c.contains(key) ? c[key].get<double>() : fallback;
    };
    inst.costs.move_tgt = get("move_tgt", inst.costs.move_tgt);
    inst.costs.wait_tgt = get("wait_tgt", inst.costs.wait_tgt);
    inst.costs.complete_tgt = get("complete_tgt", inst.costs.complete_tgt);
    inst.costs.move_non = get("move_non", inst.costs.move_non);
    inst.costs.wait_non = get("wait_non", inst.costs.wait_non);
  }
  if (j.contains("label")) inst.label = j["label"].get<std::string>();
  inst.check();
  return inst;
}

namespace {

const char* kind_word(ActionKind k) {
  switch (k) {
    case ActionKind::Move: return "move";
    case ActionKind::Wait: return "wait";
    case ActionKind::Complete: return "complete";
  }
  return "?";
}

json action_json(const Action& a) {
  json j;
  j["t"] = a.t;
  j["kind"] = kind_word(a.kind);
  j["from"] = vertex_json(a.from);
  if (a.kind == ActionKind::Move) j["to"] = vertex_json(a.to);
  return j;
}

BlockId block_from_token(const std::string& tok) {
  if (tok.size() < 2 || (tok[0] != 'T' && tok[0] != 'N'))
    throw Error(ErrorCode::parse_error, "bad block token: " + tok);
  BlockKind kind = tok[0] == 'T' ? BlockKind::Target : BlockKind::NonTarget;
  try {
    return {std::stoi(tok.substr(1)), kind};
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, "bad block token: " + tok);
  }
}

Vertex vertex_from_token(const std::string& tok) {
  auto comma = tok.find(',');
  if (comma == std::string::npos)
    throw Error(ErrorCode::parse_error, "bad vertex token: " + tok);
  try {
    return {std::stoi(tok.substr(0, comma)), std::stoi(tok.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, "bad vertex token: " + tok);
  }
}

}  // namespace

std::string plan_to_text(const Plan& P) {
  // One line per action, grouped by timestep then block, so the file reads
  // as an execution trace.
  std::vector<const Action*> all;
  for (const auto& [block, path] : P.paths)
    for (const Action& a : path.actions) all.push_back(&a);
  std::stable_sort(all.begin(), all.end(), [](const Action* x, const Action* y) {
    if (x->t != y->t) return x->t < y->t;
    return x->block < y->block;
  });
  std::ostringstream os;
  for (const Action* a : all) {
    os << "t " << a->t << " " << kind_word(a->kind) << " " << to_string(a->block)
       << " " << a->from.row << "," << a->from.col;
    if (a->kind == ActionKind::Move) os << " -> " << a->to.row << "," << a->to.col;
    os << "\n";
  }
  return os.str();
}

Plan plan_from_text(const std::string& text) {
  Plan P;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string lead;
    if (!(ls >> lead)) continue;  // blank line
    if (lead != "t")
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(lineno) + ": expected 't'");
    int t;
    std::string word, btok, vtok;
    if (!(ls >> t >> word >> btok >> vtok))
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(lineno) + ": truncated action");
    BlockId b = block_from_token(btok);
    Vertex from = vertex_from_token(vtok);
    if (word == "move") {
      std::string arrow, dtok;
      if (!(ls >> arrow >> dtok) || arrow != "->")
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(lineno) + ": move needs '-> r,c'");
      P.add(Action::move(b, t, from, vertex_from_token(dtok)));
    } else if (word == "wait") {
      P.add(Action::wait(b, t, from));
    } else if (word == "complete") {
      P.add(Action::complete(b, t, from));
    } else {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(lineno) + ": unknown action " + word);
    }
  }
  return P;
}

std::string plan_to_json(const Plan& P) {
  json paths = json::array();
  for (const auto& [block, path] : P.paths) {
    json acts = json::array();
    for (const Action& a : path.actions) acts.push_back(action_json(a));
    paths.push_back({{"block", to_string(block)}, {"actions", std::move(acts)}});
  }
  json j;
  j["paths"] = std::move(paths);
  return j.dump(2) + "\n";
}

Plan plan_from_json(const std::string& text) {
  json j = parse_document(text);
  if (!j.contains("paths") || !j["paths"].is_array())
    throw Error(ErrorCode::parse_error, "plan document needs a paths list");
  Plan P;
  for (const auto& p : j["paths"]) {
    BlockId b = block_from_token(p.at("block").get<std::string>());
    for (const auto& aj : p.at("actions")) {
      int t = aj.at("t").get<int>();
      std::string kind = aj.at("kind").get<std::string>();
      Vertex from = vertex_from(aj.at("from"));
      if (kind == "move")
        P.add(Action::move(b, t, from, vertex_from(aj.at("to"))));
      else if (kind == "wait")
        P.add(Action::wait(b, t, from));
      else if (kind == "complete")
        P.add(Action::complete(b, t, from));
      else
        throw Error(ErrorCode::parse_error, "unknown action kind: " + kind);
    }
  }
  return P;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::parse_error, "cannot write " + path);
  out << content;
}

}  // namespace brap
