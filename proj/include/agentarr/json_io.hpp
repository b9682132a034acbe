#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "agentarr/arrangement.hpp"
#include "agentarr/errors.hpp"
#include "agentarr/gadgets.hpp"
#include "agentarr/graph.hpp"
#include "agentarr/isthmus.hpp"
#include "agentarr/oracle.hpp"
#include "agentarr/pebble.hpp"

namespace agentarr::io {

using json = nlohmann::ordered_json;

inline json parse_json(const std::string& text, const std::string& where = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(where + ": malformed JSON: " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

namespace detail {

inline const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw InputError(where + ": missing field '" + name + "'");
  return *it;
}

// Vertex identifiers may be strings or small integers.
inline std::string label(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InputError(where + ": expected a vertex identifier (string or integer)");
}

inline std::vector<std::string> labels(const Graph& g, const VertexSet& s) { return g.labels_of(s); }

}  // namespace detail

// ---- graphs

inline Graph graph_from_json(const json& j, const std::string& where = "graph") {
  const json& vs = detail::field(j, "vertices", where);
  const json& es = detail::field(j, "edges", where);
  if (!vs.is_array()) throw InputError(where + ".vertices: expected an array");
  if (!es.is_array()) throw InputError(where + ".edges: expected an array");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < vs.size(); ++i)
    labels.push_back(detail::label(vs[i], where + ".vertices[" + std::to_string(i) + "]"));
  std::vector<Graph::LabelEdge> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string at = where + ".edges[" + std::to_string(i) + "]";
    if (!es[i].is_array() || es[i].size() != 2) throw InputError(at + ": expected a pair of vertices");
    edges.emplace_back(detail::label(es[i][0], at), detail::label(es[i][1], at));
  }
  try {
    return Graph(std::move(labels), edges);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline json graph_to_json(const Graph& g) {
  json j;
  j["vertices"] = g.labels();
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({g.label(u), g.label(v)});
  j["edges"] = std::move(edges);
  return j;
}

inline json vertex_set_to_json(const Graph& g, const VertexSet& s) { return g.labels_of(s); }

// ---- isthmus structure

inline json isthmus_to_json(const Graph& g, const Isthmus& iso) {
  json j;
  json path = json::array();
  for (Vertex v : iso.path) path.push_back(g.label(v));
  j["path"] = std::move(path);
  j["x"] = vertex_set_to_json(g, iso.x);
  j["y"] = vertex_set_to_json(g, iso.y);
  json comps = json::array();
  for (const auto& c : iso.components) comps.push_back(vertex_set_to_json(g, c));
  j["components"] = std::move(comps);
  return j;
}

inline json isthmus_tree_to_json(const Graph& g, const IsthmusTree& t) {
  json j;
  j["k"] = t.k;
  json isos = json::array(), blocks = json::array(), edges = json::array();
  for (const auto& i : t.isthmuses) isos.push_back(isthmus_to_json(g, i));
  for (const auto& b : t.blocks) blocks.push_back(vertex_set_to_json(g, b.vertices));
  for (const auto& [b, i] : t.edges) edges.push_back({{"block", b}, {"isthmus", i}});
  j["isthmuses"] = std::move(isos);
  j["blocks"] = std::move(blocks);
  j["tree"] = {{"block_nodes", t.blocks.size()}, {"isthmus_nodes", t.isthmuses.size()}, {"edges", std::move(edges)}};
  return j;
}

inline std::string isthmus_tree_to_dot(const Graph& g, const IsthmusTree& t) {
  auto join = [&](const std::vector<Vertex>& vs, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? sep : "") + g.label(vs[i]);
    return out;
  };
  std::ostringstream out;
  out << "graph isthmus_tree {\n";
  for (std::size_t b = 0; b < t.blocks.size(); ++b)
    out << "  B" << b << " [shape=box, label=\"{" << join(t.blocks[b].vertices.elements(), ",") << "}\"];\n";
  for (std::size_t i = 0; i < t.isthmuses.size(); ++i)
    out << "  I" << i << " [shape=ellipse, label=\"" << join(t.isthmuses[i].path, "-") << "\"];\n";
  for (const auto& [b, i] : t.edges) out << "  B" << b << " -- I" << i << ";\n";
  out << "}\n";
  return out.str();
}

// ---- configurations and move plans

inline Configuration configuration_from_json(const json& j, const std::string& where = "configuration") {
  auto board = std::make_shared<const Graph>(graph_from_json(detail::field(j, "board", where), where + ".board"));
  const json& ps = detail::field(j, "pebbles", where);
  if (!ps.is_object()) throw InputError(where + ".pebbles: expected an object mapping pebbles to vertices");
  std::vector<std::pair<std::string, std::string>> placement;
  for (auto it = ps.begin(); it != ps.end(); ++it)
    placement.emplace_back(it.key(), detail::label(it.value(), where + ".pebbles." + it.key()));
  try {
    return Configuration(board, placement);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline json configuration_to_json(const Configuration& c) {
  json j;
  j["board"] = graph_to_json(c.board());
  json ps = json::object();
  for (PebbleId p = 0; p < c.pebble_count(); ++p) ps[c.pebble_name(p)] = c.board().label(c.position(p));
  j["pebbles"] = std::move(ps);
  return j;
}

inline json move_plan_to_json(const MovePlan& plan) {
  json steps = json::array();
  for (const Move& m : plan.steps)
    steps.push_back({plan.start.pebble_name(m.pebble), plan.start.board().label(m.to)});
  return json{{"steps", std::move(steps)}};
}

inline MovePlan move_plan_from_json(const json& j, const Configuration& start, const std::string& where = "plan") {
  const json& steps = detail::field(j, "steps", where);
  if (!steps.is_array()) throw InputError(where + ".steps: expected an array");
  MovePlan plan{start, {}};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string at = where + ".steps[" + std::to_string(i) + "]";
    if (!steps[i].is_array() || steps[i].size() != 2) throw InputError(at + ": expected [pebble, vertex]");
    if (!steps[i][0].is_string()) throw InputError(at + ": pebble must be a string");
    try {
      plan.steps.push_back(Move{start.pebble(steps[i][0].get<std::string>()),
                                start.board().vertex(detail::label(steps[i][1], at))});
    } catch (const InputError& e) {
      throw InputError(at + ": " + e.what());
    }
  }
  return plan;
}

// ---- arrangements and transfer plans

struct ArrangementInput {
  Arrangement arrangement;
  std::optional<Mode> mode;
};

inline std::pair<std::shared_ptr<const Graph>, std::shared_ptr<const Graph>> graph_pair_from_json(
    const json& j, const std::string& where) {
  return {std::make_shared<const Graph>(graph_from_json(detail::field(j, "agent_graph", where), where + ".agent_graph")),
          std::make_shared<const Graph>(graph_from_json(detail::field(j, "map_graph", where), where + ".map_graph"))};
}

inline std::optional<Mode> mode_from_json(const json& j, const std::string& where) {
  auto it = j.find("mode");
  if (it == j.end()) return std::nullopt;
  if (!it->is_string()) throw InputError(where + ".mode: expected \"aap\" or \"sga\"");
  try {
    return parse_mode(it->get<std::string>());
  } catch (const InputError& e) {
    throw InputError(where + ".mode: " + e.what());
  }
}

inline ArrangementInput arrangement_from_json(const json& j, const std::string& where = "arrangement") {
  auto [ga, gm] = graph_pair_from_json(j, where);
  const json& as = detail::field(j, "assignment", where);
  if (!as.is_object()) throw InputError(where + ".assignment: expected an object mapping agents to countries");
  std::vector<std::pair<std::string, std::string>> assignment;
  for (auto it = as.begin(); it != as.end(); ++it)
    assignment.emplace_back(it.key(), detail::label(it.value(), where + ".assignment." + it.key()));
  try {
    return ArrangementInput{Arrangement(ga, gm, assignment), mode_from_json(j, where)};
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline json arrangement_to_json(const Arrangement& f, std::optional<Mode> mode = std::nullopt) {
  json j;
  j["agent_graph"] = graph_to_json(f.agents());
  j["map_graph"] = graph_to_json(f.map());
  json as = json::object();
  for (Vertex a = 0; a < f.agents().size(); ++a) as[f.agents().label(a)] = f.map().label(f.country(a));
  j["assignment"] = std::move(as);
  if (mode) j["mode"] = to_string(*mode);
  return j;
}

inline json transfer_to_json(const Arrangement& f, const Transfer& t) {
  return json{{"agents", f.agents().labels_of(t.agents)}, {"from", f.map().label(t.from)}, {"to", f.map().label(t.to)}};
}

inline json transfer_plan_to_json(const TransferPlan& plan) {
  json steps = json::array();
  for (const Transfer& t : plan.steps) steps.push_back(transfer_to_json(plan.start, t));
  return json{{"mode", to_string(plan.mode)}, {"steps", std::move(steps)}};
}

inline TransferPlan transfer_plan_from_json(const json& j, const Arrangement& start, Mode mode,
                                            const std::string& where = "plan") {
  const json& steps = detail::field(j, "steps", where);
  if (!steps.is_array()) throw InputError(where + ".steps: expected an array");
  TransferPlan plan{start, mode, {}};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string at = where + ".steps[" + std::to_string(i) + "]";
    const json& agents = detail::field(steps[i], "agents", at);
    if (!agents.is_array()) throw InputError(at + ".agents: expected an array");
    std::vector<std::string> names;
    for (std::size_t k = 0; k < agents.size(); ++k)
      names.push_back(detail::label(agents[k], at + ".agents[" + std::to_string(k) + "]"));
    try {
      plan.steps.push_back(Transfer{start.agents().set_of(names),
                                    start.map().vertex(detail::label(detail::field(steps[i], "from", at), at + ".from")),
                                    start.map().vertex(detail::label(detail::field(steps[i], "to", at), at + ".to"))});
    } catch (const InputError& e) {
      throw InputError(at + ": " + e.what());
    }
  }
  return plan;
}

inline json associated_to_json(const AssociatedConfiguration& ac, const Arrangement& f) {
  const Graph& ga = *ac.agents;
  const Graph& gm = *ac.map;
  json pebbles = json::array();
  for (std::size_t i = 0; i < ac.pebbles.size(); ++i)
    pebbles.push_back({{"agents", ga.labels_of(ac.pebbles[i])}, {"country", gm.label(ac.location[i])}});
  json isolated = json::object();
  for (Vertex a : ac.isolated_agents) isolated[ga.label(a)] = gm.label(f.country(a));
  return json{{"mode", to_string(ac.mode)},
              {"pebbles", std::move(pebbles)},
              {"isolated_agents", std::move(isolated)},
              {"board", graph_to_json(ac.board_graph())}};
}

// ---- oracle reports

inline json report_to_json(const oracle::StateSpaceReport& r) {
  return json{{"states", r.state_count}, {"components", r.component_count}, {"component_sizes", r.component_sizes}};
}

// ---- gadgets

inline json roles_to_json(const GadgetPair& gp) {
  json j = json::object();
  for (const auto& [role, names] : gp.roles()) j[role] = names;
  return j;
}

}  // namespace agentarr::io
