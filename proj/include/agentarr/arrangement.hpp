#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "agentarr/errors.hpp"
#include "agentarr/graph.hpp"
#include "agentarr/isthmus.hpp"
#include "agentarr/pebble.hpp"

namespace agentarr {

// aap: a transfer must leave an agent behind on one of its two countries.
// sga: no such restriction.
enum class Mode { aap, sga };

inline std::string to_string(Mode m) { return m == Mode::aap ? "aap" : "sga"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "aap" || s == "AAP") return Mode::aap;
  if (s == "sga" || s == "SGA") return Mode::sga;
  throw InputError("unknown mode '" + std::string(s) + "' (expected aap or sga)");
}

// Total map from agents (vertices of the agent network) to countries
// (vertices of the route map); every nonempty preimage is connected.
class Arrangement {
 public:
  Arrangement(std::shared_ptr<const Graph> agents, std::shared_ptr<const Graph> map, std::vector<Vertex> assignment)
      : agents_(std::move(agents)), map_(std::move(map)), at_(std::move(assignment)) {
    if (!agents_ || !map_) throw InputError("arrangement needs both graphs");
    if (agents_->size() == 0) throw InputError("agent network has no agents");
    if (map_->size() == 0) throw InputError("route map has no countries");
    if (!agents_->fits_mask() || !map_->fits_mask())
      throw CapacityError("arrangements support at most 64 agents and 64 countries");
    if (at_.size() != agents_->size()) throw InputError("assignment must place every agent exactly once");
    pre_.assign(map_->size(), 0);
    for (Vertex a = 0; a < at_.size(); ++a) {
      if (at_[a] >= map_->size()) throw InputError("agent '" + agents_->label(a) + "' is assigned off the map");
      pre_[at_[a]] |= bit(a);
    }
    for (Vertex c = 0; c < map_->size(); ++c)
      if (!mask_connected(*agents_, pre_[c]))
        throw InputError("agents in country '" + map_->label(c) + "' do not induce a connected subnetwork");
  }

  Arrangement(Graph agents, Graph map, const std::vector<std::pair<std::string, std::string>>& assignment)
      : Arrangement(std::make_shared<const Graph>(std::move(agents)), std::make_shared<const Graph>(std::move(map)),
                    assignment) {}

  Arrangement(std::shared_ptr<const Graph> agents, std::shared_ptr<const Graph> map,
              const std::vector<std::pair<std::string, std::string>>& assignment)
      : Arrangement(agents, map, resolve(*agents, *map, assignment)) {}

  const Graph& agents() const { return *agents_; }
  const Graph& map() const { return *map_; }
  const std::shared_ptr<const Graph>& agents_ptr() const { return agents_; }
  const std::shared_ptr<const Graph>& map_ptr() const { return map_; }
  const std::vector<Vertex>& assignment() const { return at_; }
  Vertex country(Vertex agent) const { return at_.at(agent); }
  Mask preimage_mask(Vertex c) const { return pre_.at(c); }
  VertexSet preimage(Vertex c) const { return VertexSet::from_mask(pre_.at(c)); }

  std::size_t occupied_count() const {
    return static_cast<std::size_t>(std::count_if(pre_.begin(), pre_.end(), [](Mask m) { return m != 0; }));
  }

  Arrangement reassigned(std::vector<Vertex> assignment) const { return Arrangement(agents_, map_, std::move(assignment)); }

  bool same_graphs(const Arrangement& o) const { return *agents_ == *o.agents_ && *map_ == *o.map_; }

  friend bool operator==(const Arrangement& a, const Arrangement& b) { return a.at_ == b.at_ && a.same_graphs(b); }

 private:
  static std::vector<Vertex> resolve(const Graph& agents, const Graph& map,
                                     const std::vector<std::pair<std::string, std::string>>& assignment) {
    std::vector<Vertex> at(agents.size(), 0);
    std::vector<char> seen(agents.size(), 0);
    for (const auto& [a, c] : assignment) {
      const Vertex av = agents.vertex(a);
      if (seen[av]) throw InputError("agent '" + a + "' is assigned twice");
      seen[av] = 1;
      at[av] = map.vertex(c);
    }
    for (Vertex a = 0; a < agents.size(); ++a)
      if (!seen[a]) throw InputError("agent '" + agents.label(a) + "' has no country");
    return at;
  }

  std::shared_ptr<const Graph> agents_, map_;
  std::vector<Vertex> at_;
  std::vector<Mask> pre_;
};

struct Transfer {
  VertexSet agents;
  Vertex from = 0;
  Vertex to = 0;
  friend bool operator==(const Transfer&, const Transfer&) = default;

  Transfer reversed() const { return Transfer{agents, to, from}; }
};

// The first violated legality clause, or nothing if the transfer is legal.
inline std::optional<std::string> transfer_violation(const Arrangement& f, const Transfer& t, Mode mode) {
  const Graph& ga = f.agents();
  const Graph& gm = f.map();
  if (t.from >= gm.size() || t.to >= gm.size()) return "transfer names an unknown country";
  const std::string s = gm.label(t.from), d = gm.label(t.to);
  if (!gm.adjacent(t.from, t.to)) return "countries '" + s + "' and '" + d + "' are not adjacent in the route map";
  if (t.agents.empty()) return "transfer moves no agents";
  if (t.agents.elements().back() >= ga.size()) return "transfer names an unknown agent";
  const Mask u = t.agents.mask();
  const Mask from = f.preimage_mask(t.from), to = f.preimage_mask(t.to);
  if (u & ~from) {
    const Vertex stray = static_cast<Vertex>(std::countr_zero(u & ~from));
    return "agent '" + ga.label(stray) + "' is not in country '" + s + "'";
  }
  if (!mask_connected(ga, u)) return "moved agents do not induce a connected subnetwork";
  if (!mask_connected(ga, from & ~u)) return "agents remaining in '" + s + "' would not be connected";
  if (!mask_connected(ga, to | u)) return "agents in '" + d + "' after the transfer would not be connected";
  if (mode == Mode::aap && ((from | to) & ~u) == 0)
    return "aap transfer needs an agent remaining in '" + s + "' or already in '" + d + "'";
  return std::nullopt;
}

inline Arrangement apply_transfer(const Arrangement& f, const Transfer& t, Mode mode) {
  if (auto why = transfer_violation(f, t, mode)) throw InputError("illegal transfer: " + *why);
  std::vector<Vertex> at = f.assignment();
  for (Vertex a : t.agents) at[a] = t.to;
  return f.reassigned(std::move(at));
}

struct TransferPlan {
  Arrangement start;
  Mode mode = Mode::aap;
  std::vector<Transfer> steps;

  Arrangement replay() const {
    Arrangement f = start;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (auto why = transfer_violation(f, steps[i], mode))
        throw InputError("transfer plan step " + std::to_string(i) + " is illegal: " + *why);
      f = apply_transfer(f, steps[i], mode);
    }
    return f;
  }
};

// ---------------------------------------------------------------------------
// SUBNET MERGER: gather the agents of s and t on t in at most two transfers.

struct SubnetMerger {
  Arrangement result;
  std::vector<Transfer> transfers;
  bool is_move = false;  // t was empty
};

// Lowest-labelled agent whose removal keeps the group connected.
inline Vertex vanguard_agent(const Graph& ga, Mask group) {
  for (Mask m = group; m; m &= m - 1) {
    const Vertex a = static_cast<Vertex>(std::countr_zero(m));
    if (mask_connected(ga, group & ~bit(a))) return a;
  }
  throw InternalError("connected group has a non-cut vertex");
}

inline SubnetMerger subnet_merger(const Arrangement& f, Vertex s, Vertex t, Mode mode) {
  const Graph& ga = f.agents();
  const Graph& gm = f.map();
  if (s >= gm.size() || t >= gm.size()) throw InputError("subnet merger: unknown country");
  if (!gm.adjacent(s, t))
    throw InputError("subnet merger: '" + gm.label(s) + "' and '" + gm.label(t) + "' are not adjacent");
  const Mask from = f.preimage_mask(s), to = f.preimage_mask(t);
  if (!from) throw InputError("subnet merger: country '" + gm.label(s) + "' is empty");
  if (mode == Mode::aap && std::popcount(from | to) < 2)
    throw InputError("subnet merger: aap needs at least two agents on the two countries");
  if (!mask_connected(ga, from | to))
    throw InputError("subnet merger: agents of the two countries do not induce a connected subnetwork");

  SubnetMerger out{f, {}, to == 0};
  auto step = [&](Mask u, Vertex a, Vertex b) {
    Transfer tr{VertexSet::from_mask(u), a, b};
    out.result = apply_transfer(out.result, tr, mode);
    out.transfers.push_back(std::move(tr));
  };
  if (to != 0 || mode == Mode::sga) {
    step(from, s, t);
  } else {
    const Vertex u = vanguard_agent(ga, from);
    step(bit(u), s, t);
    step(from & ~bit(u), s, t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Associated configuration.

// One connected component of the associated board.
struct BoardPiece {
  VertexSet countries;
  std::vector<std::size_t> pebbles;     // indices into AssociatedConfiguration::pebbles, ascending
  std::optional<Configuration> config;  // present when the piece holds a pebble and a free country
  std::optional<RangeAnalysis> ranges;  // ranges of config's pebbles

  bool frozen() const { return !pebbles.empty() && !config; }
  std::size_t vacancy() const { return countries.size() - pebbles.size(); }
};

struct AssociatedConfiguration {
  Mode mode = Mode::aap;
  std::shared_ptr<const Graph> agents, map;
  std::vector<VertexSet> pebbles;    // agent groups, sorted
  std::vector<Vertex> location;      // country of each pebble
  VertexSet isolated_agents;         // aap only
  VertexSet isolated_countries;      // aap only
  VertexSet board;                   // countries of the board graph
  std::vector<BoardPiece> pieces;    // ordered by smallest country
  std::vector<std::size_t> piece_of;  // per pebble

  Graph board_graph() const { return induced_subgraph(*map, board); }

  std::optional<std::size_t> pebble_at(Vertex country) const {
    for (std::size_t i = 0; i < location.size(); ++i)
      if (location[i] == country) return i;
    return std::nullopt;
  }

  // Id of pebble i inside its piece's configuration.
  PebbleId local_id(std::size_t i) const {
    const auto& ps = pieces[piece_of[i]].pebbles;
    return static_cast<PebbleId>(std::lower_bound(ps.begin(), ps.end(), i) - ps.begin());
  }
};

inline AssociatedConfiguration associated_configuration(const Arrangement& f, Mode mode,
                                                        const EnumerationLimits& limits = {}) {
  AssociatedConfiguration ac;
  ac.mode = mode;
  ac.agents = f.agents_ptr();
  ac.map = f.map_ptr();
  const Graph& gm = f.map();
  Mask isolated_countries = 0;
  for (Vertex c = 0; c < gm.size(); ++c) {
    const Mask m = f.preimage_mask(c);
    if (!m) continue;
    if (mode == Mode::aap && std::popcount(m) == 1) {
      isolated_countries |= bit(c);
      continue;
    }
    ac.pebbles.push_back(VertexSet::from_mask(m));
  }
  std::sort(ac.pebbles.begin(), ac.pebbles.end());
  for (const auto& p : ac.pebbles) ac.location.push_back(f.country(p.front()));
  Mask ia = 0;
  for (Mask m = isolated_countries; m; m &= m - 1) ia |= f.preimage_mask(static_cast<Vertex>(std::countr_zero(m)));
  ac.isolated_agents = VertexSet::from_mask(ia);
  ac.isolated_countries = VertexSet::from_mask(isolated_countries);
  const Mask board = gm.full_mask() & ~isolated_countries;
  ac.board = VertexSet::from_mask(board);

  ac.piece_of.assign(ac.pebbles.size(), 0);
  for (Mask comp : mask_components(gm, board)) {
    BoardPiece piece;
    piece.countries = VertexSet::from_mask(comp);
    for (std::size_t i = 0; i < ac.pebbles.size(); ++i)
      if (comp & bit(ac.location[i])) {
        ac.piece_of[i] = ac.pieces.size();
        piece.pebbles.push_back(i);
      }
    if (!piece.pebbles.empty() && piece.vacancy() > 0) {
      auto sub = std::make_shared<const Graph>(induced_subgraph(gm, piece.countries));
      std::vector<std::string> names;
      std::vector<Vertex> where;
      for (std::size_t i : piece.pebbles) {
        names.push_back(f.agents().label(ac.pebbles[i].front()));
        where.push_back(static_cast<Vertex>(std::lower_bound(piece.countries.begin(), piece.countries.end(),
                                                             ac.location[i]) -
                                            piece.countries.begin()));
      }
      piece.config.emplace(sub, std::move(names), std::move(where));
      piece.ranges = analyze_ranges(*piece.config, limits);
    }
    ac.pieces.push_back(std::move(piece));
  }
  return ac;
}

// ---------------------------------------------------------------------------
// Contractible pairs.

struct ContractiblePair {
  VertexSet first, second;  // agent groups: pebbles or single isolated agents
  std::string step;         // which scan step found the pair
};

namespace detail {

// Agent group candidates: pebbles first, then isolated agents.
struct Groups {
  const AssociatedConfiguration* ac;
  std::size_t pebble_count() const { return ac->pebbles.size(); }
  std::size_t size() const { return ac->pebbles.size() + ac->isolated_agents.size(); }
  bool is_pebble(std::size_t g) const { return g < pebble_count(); }
  Mask agents(std::size_t g) const {
    return is_pebble(g) ? ac->pebbles[g].mask() : bit(ac->isolated_agents[g - pebble_count()]);
  }
  Vertex country_of_isolated(std::size_t g, const Arrangement& f) const {
    return f.country(ac->isolated_agents[g - pebble_count()]);
  }
};

// Country range of pebble i on the route map.
inline Mask range_mask(const AssociatedConfiguration& ac, std::size_t i) {
  const BoardPiece& piece = ac.pieces[ac.piece_of[i]];
  if (!piece.config) return bit(ac.location[i]);
  Mask m = 0;
  for (Vertex v : piece.ranges->range(ac.local_id(i))) m |= bit(piece.countries[v]);
  return m;
}

// Exact contact test between two groups.
inline bool groups_can_contact(const AssociatedConfiguration& ac, const Arrangement& f, const Groups& gs,
                               std::size_t g1, std::size_t g2) {
  const Graph& gm = *ac.map;
  if (!gs.is_pebble(g1) && !gs.is_pebble(g2))
    return gm.adjacent(gs.country_of_isolated(g1, f), gs.country_of_isolated(g2, f));
  if (!gs.is_pebble(g1)) std::swap(g1, g2);
  if (!gs.is_pebble(g2)) {
    const Vertex c = gs.country_of_isolated(g2, f);
    return (range_mask(ac, g1) & gm.neighbor_mask(c)) != 0;
  }
  if (ac.piece_of[g1] != ac.piece_of[g2]) return false;
  const BoardPiece& piece = ac.pieces[ac.piece_of[g1]];
  if (!piece.config) return gm.adjacent(ac.location[g1], ac.location[g2]);
  return can_contact(*piece.config, *piece.ranges, ac.local_id(g1), ac.local_id(g2));
}

inline bool pair_ok(const AssociatedConfiguration& ac, const Arrangement& f, const Groups& gs, std::size_t g1,
                    std::size_t g2) {
  if (g1 == g2) return false;
  if (!mask_connected(*ac.agents, gs.agents(g1) | gs.agents(g2))) return false;
  return groups_can_contact(ac, f, gs, g1, g2);
}

inline ContractiblePair make_pair(const Groups& gs, std::size_t g1, std::size_t g2, std::string step) {
  return ContractiblePair{VertexSet::from_mask(gs.agents(g1)), VertexSet::from_mask(gs.agents(g2)), std::move(step)};
}

// Scan of one board piece: peel leaves of its isthmus tree.
inline std::optional<ContractiblePair> scan_piece(const AssociatedConfiguration& ac, const Arrangement& f,
                                                  const Groups& gs, std::size_t piece_index) {
  const BoardPiece& piece = ac.pieces[piece_index];
  const Graph& gm = *ac.map;
  std::vector<std::size_t> isolated;  // groups of isolated agents
  for (std::size_t g = gs.pebble_count(); g < gs.size(); ++g) isolated.push_back(g);

  if (piece.pebbles.empty()) return std::nullopt;
  if (!piece.config) {
    for (std::size_t p : piece.pebbles) {
      for (std::size_t q : piece.pebbles)
        if (p < q && pair_ok(ac, f, gs, p, q)) return make_pair(gs, p, q, "step 2 (full component)");
      for (std::size_t a : isolated)
        if (pair_ok(ac, f, gs, p, a)) return make_pair(gs, p, a, "step 2 (full component)");
    }
    return std::nullopt;
  }

  const IsthmusTree& tree = piece.ranges->tree;
  const std::size_t nb = tree.blocks.size();
  std::vector<char> block_alive(nb, 1), isthmus_alive(tree.isthmuses.size(), 1);
  auto alive_isthmuses_of = [&](std::size_t b) {
    std::vector<std::size_t> out;
    for (std::size_t i : tree.isthmuses_of_block(b))
      if (isthmus_alive[i]) out.push_back(i);
    return out;
  };
  auto alive_blocks_of = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t b : tree.blocks_of_isthmus(i))
      if (block_alive[b]) out.push_back(b);
    return out;
  };
  auto lift = [&](const VertexSet& local) {
    Mask m = 0;
    for (Vertex v : local) m |= bit(piece.countries[v]);
    return m;
  };
  auto pebbles_with_range = [&](std::size_t b) {
    std::vector<std::size_t> out;
    for (std::size_t p : piece.pebbles)
      if (piece.ranges->block_of[ac.local_id(p)] == b) out.push_back(p);
    return out;
  };

  for (std::size_t remaining = nb; remaining > 0; --remaining) {
    std::size_t u = nb;
    for (std::size_t b = 0; b < nb && u == nb; ++b)
      if (block_alive[b] && alive_isthmuses_of(b).size() <= 1) u = b;
    check_internal(u < nb, "pruned isthmus tree has a leaf");
    const Mask bu = lift(tree.blocks[u].vertices);
    const std::vector<std::size_t> mid = alive_isthmuses_of(u);
    std::vector<std::size_t> far;
    for (std::size_t i : mid)
      for (std::size_t b : alive_blocks_of(i))
        if (b != u) far.push_back(b);

    const std::vector<std::size_t> near = pebbles_with_range(u);
    const bool cycle = is_cycle(induced_subgraph(piece.config->board(), tree.blocks[u].vertices));
    std::vector<std::size_t> partners;
    if (!cycle) partners = near;
    for (std::size_t b : far)
      for (std::size_t p : pebbles_with_range(b)) partners.push_back(p);
    Mask touch = 0;
    for (Mask m = bu; m; m &= m - 1) touch |= gm.neighbor_mask(static_cast<Vertex>(std::countr_zero(m)));
    for (std::size_t a : isolated)
      if (touch & bit(gs.country_of_isolated(a, f))) partners.push_back(a);

    for (std::size_t p : near)
      for (std::size_t q : partners)
        if (pair_ok(ac, f, gs, p, q)) return make_pair(gs, p, q, "step 2-b");
    if (cycle)
      for (std::size_t p : near)
        for (std::size_t q : near)
          if (p < q && pair_ok(ac, f, gs, p, q)) return make_pair(gs, p, q, "step 2-c");

    block_alive[u] = 0;
    for (std::size_t i : mid)
      if (alive_blocks_of(i).size() <= 1) isthmus_alive[i] = 0;
  }
  return std::nullopt;
}

inline std::vector<std::pair<std::size_t, std::size_t>> all_contractible(const AssociatedConfiguration& ac,
                                                                          const Arrangement& f,
                                                                          const Groups& gs) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < gs.size(); ++a)
    for (std::size_t b = a + 1; b < gs.size(); ++b)
      if (pair_ok(ac, f, gs, a, b)) out.emplace_back(a, b);
  return out;
}

}  // namespace detail

// A pair of agent groups that can be brought next to each other and whose
// union is connected in the agent network. Deterministic scan order:
// isolated-agent adjacency, then each board piece leaf by leaf. With an rng,
// a uniformly random pair among all contractible pairs is returned instead.
inline std::optional<ContractiblePair> contractible_pair(const AssociatedConfiguration& ac, const Arrangement& f,
                                                         std::mt19937_64* rng = nullptr) {
  const detail::Groups gs{&ac};
  if (rng) {
    auto all = detail::all_contractible(ac, f, gs);
    if (all.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    const auto [a, b] = all[pick(*rng)];
    return detail::make_pair(gs, a, b, "random");
  }
  for (std::size_t a = gs.pebble_count(); a < gs.size(); ++a)
    for (std::size_t b = a + 1; b < gs.size(); ++b)
      if (detail::pair_ok(ac, f, gs, a, b)) return detail::make_pair(gs, a, b, "step 1");
  for (std::size_t j = 0; j < ac.pieces.size(); ++j)
    if (auto pair = detail::scan_piece(ac, f, gs, j)) return pair;
  // The leaf scan above covers every pair in practice; a full sweep keeps the
  // answer exact regardless.
  auto all = detail::all_contractible(ac, f, gs);
  if (!all.empty()) return detail::make_pair(gs, all.front().first, all.front().second, "full sweep");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Irreducible configurations.

struct ContractionOptions {
  std::optional<std::uint64_t> seed;  // random pair selection when set
  SearchLimits limits{};
};

struct IrreducibleResult {
  Arrangement arrangement;
  AssociatedConfiguration config;
  std::vector<Transfer> transfers;        // from the input arrangement to `arrangement`
  std::vector<ContractiblePair> contractions;
};

namespace detail {

inline void push_merger(Arrangement& cur, std::vector<Transfer>& out, Vertex s, Vertex t, Mode mode) {
  SubnetMerger m = subnet_merger(cur, s, t, mode);
  cur = m.result;
  out.insert(out.end(), m.transfers.begin(), m.transfers.end());
}

// Realize pebble moves of one board piece as SUBNET MOVEs.
inline void push_moves(Arrangement& cur, std::vector<Transfer>& out, const BoardPiece& piece,
                       const Configuration& start, const std::vector<Move>& moves, Mode mode) {
  Configuration c = start;
  for (const Move& mv : moves) {
    const Vertex s = piece.countries[c.position(mv.pebble)];
    const Vertex t = piece.countries[mv.to];
    check_internal(cur.preimage_mask(t) == 0, "pebble moves into an empty country");
    push_merger(cur, out, s, t, mode);
    c = c.moved(mv);
  }
}

inline std::size_t pebble_of_group(const AssociatedConfiguration& ac, const VertexSet& g) {
  auto it = std::lower_bound(ac.pebbles.begin(), ac.pebbles.end(), g);
  check_internal(it != ac.pebbles.end() && *it == g, "group is a pebble");
  return static_cast<std::size_t>(it - ac.pebbles.begin());
}

// Bring the two groups next to each other and merge the second into the first.
inline void contract(Arrangement& cur, std::vector<Transfer>& out, const AssociatedConfiguration& ac,
                     const ContractiblePair& pair, Mode mode, const SearchLimits& limits) {
  const Graph& gm = *ac.map;
  const bool p1 = pair.first.size() >= 2 || mode == Mode::sga;
  const bool p2 = pair.second.size() >= 2 || mode == Mode::sga;
  VertexSet a = pair.first, b = pair.second;
  if (!p1 && p2) std::swap(a, b);
  const bool pa = p1 || p2, pb = p1 && p2;

  if (pa && pb) {
    const std::size_t i = pebble_of_group(ac, a), j = pebble_of_group(ac, b);
    const BoardPiece& piece = ac.pieces[ac.piece_of[i]];
    if (piece.config) {
      auto plan = plan_contact(*piece.config, ac.local_id(i), ac.local_id(j), limits);
      if (!plan) throw InternalError("contact predicted but not found by search");
      push_moves(cur, out, piece, *piece.config, plan->steps, mode);
    }
  } else if (pa) {
    const std::size_t i = pebble_of_group(ac, a);
    const Vertex c = cur.country(b.front());
    const BoardPiece& piece = ac.pieces[ac.piece_of[i]];
    if (piece.config && !gm.adjacent(cur.country(a.front()), c)) {
      Mask local = 0;
      for (std::size_t v = 0; v < piece.countries.size(); ++v)
        if (gm.adjacent(piece.countries[v], c)) local |= bit(static_cast<Vertex>(v));
      auto plan = plan_reach(*piece.config, ac.local_id(i), VertexSet::from_mask(local), limits);
      if (!plan) throw InternalError("contact with an isolated agent predicted but not found by search");
      push_moves(cur, out, piece, *piece.config, plan->steps, mode);
    }
  }
  push_merger(cur, out, cur.country(b.front()), cur.country(a.front()), mode);
}

}  // namespace detail

inline IrreducibleResult irreducible_configuration(const Arrangement& f, Mode mode,
                                                   const ContractionOptions& options = {}) {
  std::optional<std::mt19937_64> rng;
  if (options.seed) rng.emplace(*options.seed);
  Arrangement cur = f;
  std::vector<Transfer> transfers;
  std::vector<ContractiblePair> done;
  for (;;) {
    AssociatedConfiguration ac = associated_configuration(cur, mode, options.limits.enumeration);
    auto pair = contractible_pair(ac, cur, rng ? &*rng : nullptr);
    if (!pair) return IrreducibleResult{cur, std::move(ac), std::move(transfers), std::move(done)};
    const std::size_t before = cur.occupied_count();
    detail::contract(cur, transfers, ac, *pair, mode, options.limits);
    check_internal(cur.occupied_count() + 1 == before, "each contraction empties one country");
    done.push_back(std::move(*pair));
  }
}

// Equality of pebble partitions and isolated agents plus pebble-motion
// equivalence on every board piece.
inline bool associated_equivalent(const AssociatedConfiguration& x, const AssociatedConfiguration& y,
                                  const Arrangement& fx, const Arrangement& fy, const SearchLimits& limits = {}) {
  if (x.mode != y.mode) throw InputError("configurations use different modes");
  if (!(*x.agents == *y.agents) || !(*x.map == *y.map)) throw InputError("configurations use different graph pairs");
  if (x.pebbles != y.pebbles || x.isolated_agents != y.isolated_agents) return false;
  for (Vertex a : x.isolated_agents)
    if (fx.country(a) != fy.country(a)) return false;
  check_internal(x.pieces.size() == y.pieces.size(), "equal boards have equal pieces");
  for (std::size_t j = 0; j < x.pieces.size(); ++j) {
    const BoardPiece& px = x.pieces[j];
    const BoardPiece& py = y.pieces[j];
    if (px.pebbles != py.pebbles) return false;
    if (!px.config) {
      for (std::size_t i : px.pebbles)
        if (x.location[i] != y.location[i]) return false;
      continue;
    }
    if (!configurations_equivalent(*px.config, *px.ranges, *py.config, *py.ranges, limits)) return false;
  }
  return true;
}

inline bool t_equivalent(const IrreducibleResult& f, const IrreducibleResult& g, const SearchLimits& limits = {}) {
  return associated_equivalent(f.config, g.config, f.arrangement, g.arrangement, limits);
}

inline bool t_equivalent(const Arrangement& f, const Arrangement& g, Mode mode, const ContractionOptions& options = {}) {
  if (!f.same_graphs(g)) throw InputError("arrangements are on different graph pairs");
  if (f == g) return true;
  return t_equivalent(irreducible_configuration(f, mode, options), irreducible_configuration(g, mode, options),
                      options.limits);
}

// Transfers from f to g: contract f, move the pebbles of the irreducible
// configuration, then undo g's contraction in reverse.
inline TransferPlan transfer_plan(const Arrangement& f, const Arrangement& g, Mode mode,
                                  const ContractionOptions& options = {}) {
  if (!f.same_graphs(g)) throw InputError("arrangements are on different graph pairs");
  TransferPlan plan{f, mode, {}};
  if (f == g) return plan;
  const IrreducibleResult fi = irreducible_configuration(f, mode, options);
  const IrreducibleResult gi = irreducible_configuration(g, mode, options);
  if (!t_equivalent(fi, gi, options.limits)) throw LogicError("arrangements are not t-equivalent");

  plan.steps = fi.transfers;
  Arrangement cur = fi.arrangement;
  for (std::size_t j = 0; j < fi.config.pieces.size(); ++j) {
    const BoardPiece& piece = fi.config.pieces[j];
    if (!piece.config) continue;
    const MovePlan mp = move_plan(*piece.config, *gi.config.pieces[j].config, options.limits);
    detail::push_moves(cur, plan.steps, piece, *piece.config, mp.steps, mode);
  }
  check_internal(cur == gi.arrangement, "pebble motion reaches the second irreducible arrangement");
  for (auto it = gi.transfers.rbegin(); it != gi.transfers.rend(); ++it) plan.steps.push_back(it->reversed());
  check_internal(plan.replay() == g, "transfer plan reaches its target");
  return plan;
}

}  // namespace agentarr
