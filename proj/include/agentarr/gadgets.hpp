#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "agentarr/arrangement.hpp"
#include "agentarr/errors.hpp"
#include "agentarr/graph.hpp"

namespace agentarr {

// Backtracking search; vertex order of the result starts at vertex 0.
inline std::optional<std::vector<Vertex>> find_hamiltonian_cycle(const Graph& g, std::size_t max_vertices = 12) {
  const std::size_t n = g.size();
  if (n > max_vertices)
    throw CapacityError("Hamiltonicity check is limited to " + std::to_string(max_vertices) + " vertices");
  if (n < 3) return std::nullopt;
  std::vector<Vertex> path{0};
  std::vector<char> used(n, 0);
  used[0] = 1;
  auto extend = [&](auto&& self) -> bool {
    if (path.size() == n) return g.adjacent(path.back(), 0);
    for (Vertex w : g.neighbors(path.back())) {
      if (used[w]) continue;
      used[w] = 1;
      path.push_back(w);
      if (self(self)) return true;
      path.pop_back();
      used[w] = 0;
    }
    return false;
  };
  if (extend(extend)) return path;
  return std::nullopt;
}

inline bool is_hamiltonian(const Graph& g, std::size_t max_vertices = 12) {
  return find_hamiltonian_cycle(g, max_vertices).has_value();
}

inline bool is_hamiltonian_cycle(const Graph& g, const std::vector<Vertex>& cycle) {
  if (cycle.size() != g.size() || cycle.size() < 3) return false;
  std::vector<char> seen(g.size(), 0);
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (cycle[i] >= g.size() || seen[cycle[i]]) return false;
    seen[cycle[i]] = 1;
    if (!g.adjacent(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
  }
  return true;
}

namespace detail {

inline std::string fresh_label(const Graph& g, std::string base) {
  while (g.find(base)) base += "'";
  return base;
}

inline void require_connected_graph(const Graph& g, const char* op) {
  if (g.size() == 0) throw InputError(std::string(op) + ": graph is empty");
  if (!g.fits_mask()) throw CapacityError(std::string(op) + ": graphs above 64 vertices are not supported");
  if (!mask_connected(g, g.full_mask())) throw InputError(std::string(op) + ": graph is disconnected");
}

}  // namespace detail

// Adds a path v-a-b-c with c joined to every neighbour of v, where v is the
// smallest vertex. The result is Hamiltonian iff g is, and its complement is
// connected.
inline Graph restrict_hc(const Graph& g) {
  detail::require_connected_graph(g, "restrict_hc");
  if (g.size() < 3) throw InputError("restrict_hc needs at least three vertices");
  const std::string v = g.label(0);
  const std::string a = detail::fresh_label(g, "a"), b = detail::fresh_label(g, "b"), c = detail::fresh_label(g, "c");
  std::vector<std::string> labels = g.labels();
  labels.insert(labels.end(), {a, b, c});
  std::vector<Graph::LabelEdge> edges;
  for (const auto& [x, y] : g.edges()) edges.emplace_back(g.label(x), g.label(y));
  edges.emplace_back(v, a);
  edges.emplace_back(a, b);
  edges.emplace_back(b, c);
  for (Vertex x : g.neighbors(0)) edges.emplace_back(c, g.label(x));
  Graph h(std::move(labels), edges);
  check_internal(mask_connected(h, h.full_mask()), "restricted graph is connected");
  const Graph hc = complement(h);
  check_internal(mask_connected(hc, hc.full_mask()), "restricted graph has a connected complement");
  return h;
}

struct GadgetPair {
  Graph h;
  std::shared_ptr<const Graph> ga, gm;
  // Vertex indices by role. h_agents[i] is the agent standing for vertex i of h.
  std::vector<Vertex> h_agents, x_agents;
  Vertex a = 0, b = 0;
  std::vector<Vertex> c_countries, y_countries;
  Vertex p = 0, q = 0;

  std::size_t n() const { return h.size(); }

  std::map<std::string, std::vector<std::string>> roles() const {
    auto names = [](const Graph& g, const std::vector<Vertex>& vs) {
      std::vector<std::string> out;
      for (Vertex v : vs) out.push_back(g.label(v));
      return out;
    };
    return {{"H", names(*ga, h_agents)}, {"X", names(*ga, x_agents)}, {"a", {ga->label(a)}},
            {"b", {ga->label(b)}},       {"C", names(*gm, c_countries)}, {"Y", names(*gm, y_countries)},
            {"p", {gm->label(p)}},       {"q", {gm->label(q)}}};
  }
};

struct GadgetOptions {
  bool require_connected_complement = true;
};

// Agent labels: h_<vertex>, x1..xn, a, b. Country labels: c1..cn, y1..yn, p, q.
inline GadgetPair almighty_gadget(const Graph& h, const GadgetOptions& options = {}) {
  detail::require_connected_graph(h, "almighty_gadget");
  const std::size_t n = h.size();
  if (n < 3) throw InputError("almighty_gadget needs at least three vertices (the cycle C must be simple)");
  if (2 * n + 2 > kMaskBits) throw CapacityError("almighty_gadget: graphs above 31 vertices are not supported");
  const Graph hbar = complement(h);
  if (options.require_connected_complement && !mask_connected(hbar, hbar.full_mask()))
    throw InputError("almighty_gadget: the complement of the input graph is disconnected");

  auto num = [](const char* prefix, std::size_t i) { return std::string(prefix) + std::to_string(i + 1); };
  std::vector<std::string> al, ml;
  std::vector<Graph::LabelEdge> ae, me;
  for (Vertex v = 0; v < n; ++v) al.push_back("h_" + h.label(v));
  for (std::size_t i = 0; i < n; ++i) al.push_back(num("x", i));
  al.insert(al.end(), {"a", "b"});
  for (const auto& [u, v] : hbar.edges()) ae.emplace_back("h_" + h.label(u), "h_" + h.label(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) ae.emplace_back(num("x", i), num("x", j));
  for (Vertex v = 0; v < n; ++v) {
    ae.emplace_back("a", "h_" + h.label(v));
    ae.emplace_back("b", "h_" + h.label(v));
  }
  for (std::size_t i = 0; i < n; ++i) ae.emplace_back("a", num("x", i));

  for (std::size_t i = 0; i < n; ++i) ml.push_back(num("c", i));
  for (std::size_t i = 0; i < n; ++i) ml.push_back(num("y", i));
  ml.insert(ml.end(), {"p", "q"});
  for (std::size_t i = 0; i < n; ++i) me.emplace_back(num("c", i), num("c", (i + 1) % n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) me.emplace_back(num("y", i), num("y", j));
    for (std::size_t j = 0; j < n; ++j) me.emplace_back(num("y", i), num("c", j));
    me.emplace_back(num("y", i), "q");
  }
  me.emplace_back("p", "q");

  GadgetPair gp;
  gp.h = h;
  gp.ga = std::make_shared<const Graph>(std::move(al), ae);
  gp.gm = std::make_shared<const Graph>(std::move(ml), me);
  for (Vertex v = 0; v < n; ++v) gp.h_agents.push_back(gp.ga->vertex("h_" + h.label(v)));
  for (std::size_t i = 0; i < n; ++i) {
    gp.x_agents.push_back(gp.ga->vertex(num("x", i)));
    gp.c_countries.push_back(gp.gm->vertex(num("c", i)));
    gp.y_countries.push_back(gp.gm->vertex(num("y", i)));
  }
  gp.a = gp.ga->vertex("a");
  gp.b = gp.ga->vertex("b");
  gp.p = gp.gm->vertex("p");
  gp.q = gp.gm->vertex("q");
  return gp;
}

// Bijection a->p, b->q, x_i->y_i and cycle[i]->c_{i+1}; every complement
// edge of h lands on a non-edge of the route map.
inline Arrangement hamiltonian_witness_arrangement(const GadgetPair& gp, const std::vector<Vertex>& cycle) {
  if (!is_hamiltonian_cycle(gp.h, cycle)) throw InputError("witness needs a Hamiltonian cycle of the gadget's graph");
  std::vector<Vertex> at(gp.ga->size());
  at[gp.a] = gp.p;
  at[gp.b] = gp.q;
  for (std::size_t i = 0; i < gp.n(); ++i) {
    at[gp.x_agents[i]] = gp.y_countries[i];
    at[gp.h_agents[cycle[i]]] = gp.c_countries[i];
  }
  Arrangement f(gp.ga, gp.gm, std::move(at));
  const Graph hbar = complement(gp.h);
  for (const auto& [u, v] : hbar.edges())
    check_internal(!gp.gm->adjacent(f.country(gp.h_agents[u]), f.country(gp.h_agents[v])),
                   "complement edges map to non-edges");
  return f;
}

inline Arrangement all_on_p(const GadgetPair& gp) {
  return Arrangement(gp.ga, gp.gm, std::vector<Vertex>(gp.ga->size(), gp.p));
}

// For every country other than f(a), the agents there are not drawn from
// both V(H) + b and X.
inline bool separation_holds(const GadgetPair& gp, const Arrangement& f) {
  Mask hb = bit(f.country(gp.b)), xs = 0;
  for (Vertex v : gp.h_agents) hb |= bit(f.country(v));
  for (Vertex v : gp.x_agents) xs |= bit(f.country(v));
  return ((hb & xs) & ~bit(f.country(gp.a))) == 0;
}

// Subcase label of the almightiness argument for f, "1.1" .. "4.5", or
// "uncovered" when none of the listed conditions applies.
inline std::string reduction_case(const GadgetPair& gp, const Arrangement& f) {
  auto in = [](const std::vector<Vertex>& set, Vertex v) { return std::find(set.begin(), set.end(), v) != set.end(); };
  std::vector<Vertex> hx = gp.h_agents;
  hx.insert(hx.end(), gp.x_agents.begin(), gp.x_agents.end());
  auto any_of = [&](const std::vector<Vertex>& agents, auto pred) {
    return std::any_of(agents.begin(), agents.end(), [&](Vertex v) { return pred(f.country(v)); });
  };
  auto all_of = [&](const std::vector<Vertex>& agents, auto pred) {
    return std::all_of(agents.begin(), agents.end(), [&](Vertex v) { return pred(f.country(v)); });
  };
  const Vertex fa = f.country(gp.a), fb = f.country(gp.b);
  const auto is_y = [&](Vertex c) { return in(gp.y_countries, c); };
  const auto is_c = [&](Vertex c) { return in(gp.c_countries, c); };

  if (is_y(fa)) {
    if (any_of(gp.h_agents, [&](Vertex c) { return c != gp.p; })) return "1.1";
    return fb == gp.q ? "1.2" : "1.3";
  }
  if (is_c(fa)) {
    if (any_of(hx, is_y)) return "2.1";
    std::vector<Vertex> cq = gp.c_countries;
    cq.push_back(gp.q);
    const bool crowded = std::any_of(cq.begin(), cq.end(), [&](Vertex w) { return std::popcount(f.preimage_mask(w)) >= 2; });
    return crowded ? "2.2" : "2.3";
  }
  if (fa == gp.q) {
    if (any_of(hx, is_y)) return "3.1";
    if (any_of(hx, [&](Vertex c) { return c == gp.p; })) return "3.2";
    return "uncovered";
  }
  if (fb == gp.p) return "4.1";
  if (any_of(hx, [&](Vertex c) { return c == gp.q; })) return "4.2";
  if (any_of(gp.h_agents, is_y)) return "4.3";
  if (all_of(gp.h_agents, is_c)) return is_y(fb) ? "4.4" : "4.5";
  return "uncovered";
}

inline const std::vector<std::string>& reduction_cases() {
  static const std::vector<std::string> cases{"1.1", "1.2", "1.3", "2.1", "2.2", "2.3", "3.1",
                                              "3.2", "4.1", "4.2", "4.3", "4.4", "4.5"};
  return cases;
}

// A fixed arrangement falling into the given subcase. Needs n >= 3 and, for
// subcase 1.2, a connected complement of h.
inline Arrangement proof_case_fixture(const GadgetPair& gp, const std::string& which) {
  const std::size_t n = gp.n();
  if (n < 3) throw InputError("proof_case_fixture needs a gadget with n >= 3");
  const auto& H = gp.h_agents;
  const auto& X = gp.x_agents;
  const auto& C = gp.c_countries;
  const auto& Y = gp.y_countries;
  std::vector<Vertex> at(gp.ga->size(), gp.p);
  auto h_on_cycle = [&](std::size_t from_h, std::size_t from_c, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) at[H[from_h + i]] = C[from_c + i];
  };
  auto x_on_y = [&](std::size_t from_x, std::size_t from_y, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) at[X[from_x + i]] = Y[from_y + i];
  };

  if (which == "1.1") {
    at[gp.a] = Y[0];
    h_on_cycle(0, 0, n);
    x_on_y(0, 1, n - 1);
    at[X[n - 1]] = gp.q;
    at[gp.b] = gp.p;
  } else if (which == "1.2") {
    at[gp.a] = Y[0];
    at[X[n - 1]] = Y[0];
    x_on_y(0, 1, n - 1);
    for (Vertex v : H) at[v] = gp.p;
    at[gp.b] = gp.q;
  } else if (which == "1.3") {
    at[gp.a] = Y[0];
    for (Vertex v : H) at[v] = gp.p;
    at[gp.b] = gp.p;
    for (Vertex v : X) at[v] = gp.q;
  } else if (which == "2.1") {
    at[gp.a] = C[0];
    at[X[0]] = Y[0];
    h_on_cycle(0, 1, n - 1);
    at[H[n - 1]] = gp.q;
    x_on_y(1, 1, n - 1);
    at[gp.b] = gp.p;
  } else if (which == "2.2") {
    at[gp.a] = C[0];
    for (Vertex v : X) at[v] = C[1];
    h_on_cycle(0, 2, n - 2);
    at[H[n - 2]] = gp.p;
    at[H[n - 1]] = gp.q;
    at[gp.b] = Y[0];
  } else if (which == "2.3") {
    at[gp.a] = C[0];
    for (Vertex v : X) at[v] = gp.p;
    h_on_cycle(0, 1, n - 1);
    at[H[n - 1]] = gp.q;
    at[gp.b] = Y[0];
  } else if (which == "3.1") {
    at[gp.a] = gp.q;
    at[X[0]] = Y[0];
    h_on_cycle(0, 0, n);
    x_on_y(1, 1, n - 1);
    at[gp.b] = gp.p;
  } else if (which == "3.2") {
    at[gp.a] = gp.q;
    for (Vertex v : X) at[v] = gp.p;
    h_on_cycle(0, 0, n);
    at[gp.b] = Y[0];
  } else if (which == "4.1") {
    at[gp.a] = gp.p;
    at[gp.b] = gp.p;
    at[H[0]] = gp.p;
    h_on_cycle(1, 0, n - 1);
    x_on_y(0, 0, n);
  } else if (which == "4.2") {
    at[gp.a] = gp.p;
    at[X[0]] = gp.q;
    h_on_cycle(0, 0, n);
    x_on_y(1, 1, n - 1);
    at[gp.b] = Y[0];
  } else if (which == "4.3") {
    at[gp.a] = gp.p;
    at[H[0]] = Y[0];
    h_on_cycle(1, 0, n - 1);
    at[X[0]] = Y[1];
    at[X[n - 1]] = Y[1];
    x_on_y(1, 2, n - 2);
    at[gp.b] = gp.q;
  } else if (which == "4.4") {
    at[gp.a] = gp.p;
    at[gp.b] = Y[0];
    h_on_cycle(0, 0, n);
    at[X[0]] = Y[1];
    at[X[n - 1]] = Y[1];
    x_on_y(1, 2, n - 2);
  } else if (which == "4.5") {
    at[gp.a] = gp.p;
    at[gp.b] = gp.q;
    h_on_cycle(0, 0, n);
    x_on_y(0, 0, n);
  } else {
    throw InputError("unknown proof subcase '" + which + "'");
  }
  Arrangement f(gp.ga, gp.gm, std::move(at));
  check_internal(reduction_case(gp, f) == which, "fixture falls into its subcase");
  return f;
}

}  // namespace agentarr
