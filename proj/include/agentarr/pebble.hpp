#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agentarr/errors.hpp"
#include "agentarr/graph.hpp"
#include "agentarr/isthmus.hpp"

namespace agentarr {

using PebbleId = std::uint32_t;

struct Move {
  PebbleId pebble = 0;
  Vertex to = 0;
  friend bool operator==(const Move&, const Move&) = default;
};

struct SearchLimits {
  std::size_t max_states = 10'000'000;
  EnumerationLimits enumeration{};
};

// Injective placement of labelled pebbles on a connected board with at least
// one unoccupied vertex. Pebble ids follow natural order of pebble names.
class Configuration {
 public:
  Configuration(std::shared_ptr<const Graph> board, std::vector<std::string> pebbles, std::vector<Vertex> positions)
      : board_(std::move(board)) {
    if (!board_ || board_->size() == 0) throw InputError("configuration board is empty");
    if (!board_->fits_mask()) throw CapacityError("configuration boards above 64 vertices are not supported");
    if (!mask_connected(*board_, board_->full_mask())) throw InputError("configuration board is disconnected");
    if (pebbles.size() != positions.size()) throw InputError("pebble and position counts differ");
    std::vector<std::size_t> order(pebbles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return natural_less(pebbles[a], pebbles[b]); });
    for (std::size_t i : order) {
      names_.push_back(pebbles[i]);
      at_.push_back(positions[i]);
    }
    for (std::size_t i = 1; i < names_.size(); ++i)
      if (names_[i] == names_[i - 1]) throw InputError("duplicate pebble '" + names_[i] + "'");
    if (names_.size() >= board_->size())
      throw InputError("configuration needs at least one unoccupied vertex (" + std::to_string(names_.size()) +
                       " pebbles on " + std::to_string(board_->size()) + " vertices)");
    for (std::size_t i = 0; i < at_.size(); ++i) {
      if (at_[i] >= board_->size()) throw InputError("pebble '" + names_[i] + "' is placed off the board");
      if (occupied_ & bit(at_[i]))
        throw InputError("vertex '" + board_->label(at_[i]) + "' holds more than one pebble");
      occupied_ |= bit(at_[i]);
    }
  }

  Configuration(Graph board, const std::vector<std::pair<std::string, std::string>>& placement)
      : Configuration(std::make_shared<const Graph>(std::move(board)), placement) {}

  Configuration(std::shared_ptr<const Graph> board, const std::vector<std::pair<std::string, std::string>>& placement)
      : Configuration(board, names_of(placement), positions_of(*board, placement)) {}

  const Graph& board() const { return *board_; }
  const std::shared_ptr<const Graph>& board_ptr() const { return board_; }
  std::size_t pebble_count() const { return names_.size(); }
  std::size_t vacancy() const { return board_->size() - names_.size(); }
  const std::vector<std::string>& pebbles() const { return names_; }
  const std::string& pebble_name(PebbleId p) const { return names_.at(p); }
  const std::vector<Vertex>& positions() const { return at_; }
  Vertex position(PebbleId p) const { return at_.at(p); }
  Mask occupied_mask() const { return occupied_; }

  PebbleId pebble(std::string_view name) const {
    for (PebbleId i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw InputError("unknown pebble '" + std::string(name) + "'");
  }

  std::optional<PebbleId> occupant(Vertex v) const {
    if (!(occupied_ & bit(v))) return std::nullopt;
    for (PebbleId i = 0; i < at_.size(); ++i)
      if (at_[i] == v) return i;
    return std::nullopt;
  }

  bool is_legal(const Move& m) const {
    return m.pebble < at_.size() && m.to < board_->size() && !(occupied_ & bit(m.to)) &&
           board_->adjacent(at_[m.pebble], m.to);
  }

  Configuration moved(const Move& m) const {
    if (!is_legal(m)) {
      const std::string who = m.pebble < names_.size() ? names_[m.pebble] : std::to_string(m.pebble);
      const std::string where = m.to < board_->size() ? board_->label(m.to) : std::to_string(m.to);
      throw InputError("illegal move of pebble '" + who + "' to '" + where + "'");
    }
    Configuration next = *this;
    next.occupied_ = (occupied_ & ~bit(at_[m.pebble])) | bit(m.to);
    next.at_[m.pebble] = m.to;
    return next;
  }

  Configuration with_positions(std::vector<Vertex> positions) const {
    return Configuration(board_, names_, std::move(positions));
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.names_ == b.names_ && a.at_ == b.at_ && *a.board_ == *b.board_;
  }

 private:
  static std::vector<std::string> names_of(const std::vector<std::pair<std::string, std::string>>& placement) {
    std::vector<std::string> out;
    for (const auto& [p, v] : placement) out.push_back(p);
    return out;
  }
  static std::vector<Vertex> positions_of(const Graph& g,
                                          const std::vector<std::pair<std::string, std::string>>& placement) {
    std::vector<Vertex> out;
    for (const auto& [p, v] : placement) out.push_back(g.vertex(v));
    return out;
  }

  std::shared_ptr<const Graph> board_;
  std::vector<std::string> names_;
  std::vector<Vertex> at_;
  Mask occupied_ = 0;
};

struct MovePlan {
  Configuration start;
  std::vector<Move> steps;

  // Final configuration; throws InputError on the first illegal step.
  Configuration replay() const {
    Configuration c = start;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (!c.is_legal(steps[i])) throw InputError("move plan step " + std::to_string(i) + " is illegal");
      c = c.moved(steps[i]);
    }
    return c;
  }
};

inline std::vector<Move> legal_moves(const Configuration& c) {
  std::vector<Move> out;
  const Graph& g = c.board();
  for (PebbleId p = 0; p < c.pebble_count(); ++p)
    for (Vertex w : g.neighbors(c.position(p)))
      if (!(c.occupied_mask() & bit(w))) out.push_back(Move{p, w});
  return out;
}

// ---------------------------------------------------------------------------
// State-space search over placements. A search state is the occupied-vertex
// mask plus the positions of "tracked" pebbles; untracked pebbles are
// interchangeable. Moves are recorded as (from, to) vertex pairs.

namespace detail {

using VertexMove = std::pair<Vertex, Vertex>;
inline constexpr std::size_t kMaxTracked = 21;

struct SearchKey {
  Mask occupied = 0;
  std::uint64_t lo = 0, hi = 0;
  friend bool operator==(const SearchKey&, const SearchKey&) = default;
};

struct SearchKeyHash {
  std::size_t operator()(const SearchKey& k) const {
    std::uint64_t h = k.occupied * 0x9E3779B97F4A7C15ULL;
    h ^= k.lo + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    h ^= k.hi + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

inline SearchKey encode(Mask occupied, const std::vector<Vertex>& tracked) {
  if (tracked.size() > kMaxTracked) throw CapacityError("search tracks at most 21 pebbles at once");
  SearchKey k;
  k.occupied = occupied;
  for (std::size_t i = 0; i < tracked.size(); ++i) {
    const std::uint64_t v = tracked[i];
    if (i < 10) k.lo |= v << (6 * i);
    else k.hi |= v << (6 * (i - 10));
  }
  return k;
}

inline Vertex tracked_at(const SearchKey& k, std::size_t i) {
  return static_cast<Vertex>(i < 10 ? (k.lo >> (6 * i)) & 63 : (k.hi >> (6 * (i - 10))) & 63);
}

inline SearchKey with_tracked(SearchKey k, std::size_t i, Vertex v) {
  const std::uint64_t clear = ~(std::uint64_t{63} << (6 * (i < 10 ? i : i - 10)));
  if (i < 10) k.lo = (k.lo & clear) | (std::uint64_t{v} << (6 * i));
  else k.hi = (k.hi & clear) | (std::uint64_t{v} << (6 * (i - 10)));
  return k;
}

struct SearchRecord {
  SearchKey parent;
  Vertex from = 0, to = 0;
  bool root = false;
};

using SearchMap = std::unordered_map<SearchKey, SearchRecord, SearchKeyHash>;

template <typename Emit>
void expand(const Graph& g, Mask region, std::size_t tracked_count, const SearchKey& key, Emit&& emit) {
  for (Mask src = key.occupied & region; src; src &= src - 1) {
    const Vertex u = static_cast<Vertex>(std::countr_zero(src));
    const Mask targets = g.neighbor_mask(u) & region & ~key.occupied;
    if (!targets) continue;
    std::size_t who = tracked_count;
    for (std::size_t i = 0; i < tracked_count; ++i)
      if (tracked_at(key, i) == u) who = i;
    for (Mask t = targets; t; t &= t - 1) {
      const Vertex w = static_cast<Vertex>(std::countr_zero(t));
      SearchKey next = key;
      next.occupied = (key.occupied & ~bit(u)) | bit(w);
      if (who < tracked_count) next = with_tracked(next, who, w);
      emit(next, u, w);
    }
  }
}

inline std::vector<VertexMove> unwind(const SearchMap& map, SearchKey key) {
  std::vector<VertexMove> out;
  for (auto it = map.find(key); !it->second.root; it = map.find(key)) {
    out.emplace_back(it->second.from, it->second.to);
    key = it->second.parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline void check_cap(std::size_t states, std::size_t cap) {
  if (states > cap) throw CapacityError("search exceeded the state cap of " + std::to_string(cap));
}

// Breadth-first search from `start` to the nearest state satisfying `goal`.
template <typename Goal>
std::optional<std::vector<VertexMove>> search_forward(const Graph& g, Mask region, Mask occupied,
                                                      const std::vector<Vertex>& tracked, Goal goal,
                                                      std::size_t cap) {
  const SearchKey start = encode(occupied, tracked);
  const std::size_t n = tracked.size();
  if (goal(start)) return std::vector<VertexMove>{};
  SearchMap seen;
  seen.emplace(start, SearchRecord{start, 0, 0, true});
  std::vector<SearchKey> frontier{start};
  while (!frontier.empty()) {
    std::vector<SearchKey> next;
    for (const SearchKey& key : frontier) {
      std::optional<SearchKey> hit;
      expand(g, region, n, key, [&](const SearchKey& child, Vertex u, Vertex w) {
        if (hit || seen.count(child)) return;
        seen.emplace(child, SearchRecord{key, u, w, false});
        if (goal(child)) hit = child;
        next.push_back(child);
      });
      if (hit) return unwind(seen, *hit);
      check_cap(seen.size(), cap);
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

// Bidirectional breadth-first search between two fully specified states.
inline std::optional<std::vector<VertexMove>> search_between(const Graph& g, Mask region, Mask start_occupied,
                                                             const std::vector<Vertex>& start_tracked,
                                                             Mask goal_occupied,
                                                             const std::vector<Vertex>& goal_tracked,
                                                             std::size_t cap) {
  const SearchKey start = encode(start_occupied, start_tracked);
  const SearchKey goal = encode(goal_occupied, goal_tracked);
  if (start == goal) return std::vector<VertexMove>{};
  const std::size_t n = start_tracked.size();
  SearchMap fwd, bwd;
  fwd.emplace(start, SearchRecord{start, 0, 0, true});
  bwd.emplace(goal, SearchRecord{goal, 0, 0, true});
  std::vector<SearchKey> ffront{start}, bfront{goal};
  while (!ffront.empty() && !bfront.empty()) {
    const bool forward = ffront.size() <= bfront.size();
    SearchMap& mine = forward ? fwd : bwd;
    const SearchMap& other = forward ? bwd : fwd;
    std::vector<SearchKey>& front = forward ? ffront : bfront;
    std::vector<SearchKey> next;
    std::optional<SearchKey> meet;
    for (const SearchKey& key : front) {
      expand(g, region, n, key, [&](const SearchKey& child, Vertex u, Vertex w) {
        if (meet || mine.count(child)) return;
        mine.emplace(child, SearchRecord{key, u, w, false});
        if (other.count(child)) meet = child;
        next.push_back(child);
      });
      if (meet) break;
      check_cap(fwd.size() + bwd.size(), cap);
    }
    if (meet) {
      std::vector<VertexMove> path = unwind(fwd, *meet);
      std::vector<VertexMove> back = unwind(bwd, *meet);
      for (auto it = back.rbegin(); it != back.rend(); ++it) path.emplace_back(it->second, it->first);
      return path;
    }
    front = std::move(next);
  }
  return std::nullopt;
}

// Mutable placement used while building plans.
class Work {
 public:
  explicit Work(const Configuration& c) : g_(&c.board()), at_(c.positions()), occ_(c.board().size(), -1) {
    for (PebbleId p = 0; p < at_.size(); ++p) occ_[at_[p]] = static_cast<int>(p);
  }

  const Graph& graph() const { return *g_; }
  Vertex at(PebbleId p) const { return at_[p]; }
  int occupant(Vertex v) const { return occ_[v]; }
  bool occupied(Vertex v) const { return occ_[v] >= 0; }
  const std::vector<Vertex>& positions() const { return at_; }
  const std::vector<Move>& moves() const { return moves_; }

  Mask occupied_mask() const {
    Mask m = 0;
    for (Vertex v : at_) m |= bit(v);
    return m;
  }

  void slide(Vertex from, Vertex to) {
    check_internal(occ_[from] >= 0 && occ_[to] < 0 && g_->adjacent(from, to), "slide is a legal move");
    const PebbleId p = static_cast<PebbleId>(occ_[from]);
    occ_[to] = occ_[from];
    occ_[from] = -1;
    at_[p] = to;
    moves_.push_back(Move{p, to});
  }

  void apply(const std::vector<VertexMove>& moves) {
    for (const auto& [u, w] : moves) slide(u, w);
  }

  // Bring the nearest hole to x by sliding pebbles along a shortest path whose
  // inner vertices are all occupied. Vertices in `frozen` never move.
  void pull_hole_to(Vertex x, Mask frozen = 0) {
    if (!occupied(x)) return;
    check_internal(!(frozen & bit(x)), "target vertex is not frozen");
    std::vector<int> parent(g_->size(), -1);
    std::vector<Vertex> queue{x};
    parent[x] = static_cast<int>(x);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex u = queue[head];
      for (Vertex w : g_->neighbors(u)) {
        if (parent[w] != -1 || (frozen & bit(w))) continue;
        parent[w] = static_cast<int>(u);
        if (!occupied(w)) {
          // Path x = p0 .. pr = w; slide from the hole end backwards.
          for (Vertex cur = w; cur != x;) {
            const Vertex prev = static_cast<Vertex>(parent[cur]);
            slide(prev, cur);
            cur = prev;
          }
          return;
        }
        queue.push_back(w);
      }
    }
    throw LogicError("no unoccupied vertex can be routed to '" + g_->label(x) + "'");
  }

 private:
  const Graph* g_;
  std::vector<Vertex> at_;
  std::vector<int> occ_;
  std::vector<Move> moves_;
};

inline Configuration finish(const Configuration& start, const Work& w) { return start.with_positions(w.positions()); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Reachable ranges.

// Moves that gather all k holes into a connected set around p's vertex
// without ever moving p. The returned configuration has
// V \ (positions of other pebbles) connected, of size k + 1.
inline std::pair<Configuration, std::vector<Move>> gather_holes(const Configuration& c, PebbleId p) {
  const Graph& g = c.board();
  detail::Work w(c);
  const Vertex v = c.position(p);
  const std::size_t want = c.vacancy() + 1;
  for (;;) {
    Mask free = ~w.occupied_mask() & g.full_mask();
    const Mask region = mask_reach(g, bit(v), free | bit(v));
    if (static_cast<std::size_t>(std::popcount(region)) == want) break;
    // Nearest hole outside the region, through occupied vertices only.
    std::vector<int> parent(g.size(), -1);
    std::vector<Vertex> queue;
    for (Mask r = region; r; r &= r - 1) {
      const Vertex u = static_cast<Vertex>(std::countr_zero(r));
      parent[u] = static_cast<int>(u);
      queue.push_back(u);
    }
    bool done = false;
    for (std::size_t head = 0; head < queue.size() && !done; ++head) {
      const Vertex u = queue[head];
      for (Vertex x : g.neighbors(u)) {
        if (parent[x] != -1) continue;
        parent[x] = static_cast<int>(u);
        if (!w.occupied(x)) {
          for (Vertex cur = x; !(region & bit(static_cast<Vertex>(parent[cur])));) {
            const Vertex prev = static_cast<Vertex>(parent[cur]);
            w.slide(prev, cur);
            cur = prev;
          }
          done = true;
          break;
        }
        queue.push_back(x);
      }
    }
    check_internal(done, "hole gathering makes progress on a connected board");
  }
  return {detail::finish(c, w), w.moves()};
}

// Range block of every pebble, sharing one isthmus tree.
struct RangeAnalysis {
  IsthmusTree tree;
  std::vector<std::size_t> block_of;  // per pebble: index into tree.blocks

  const VertexSet& range(PebbleId p) const { return tree.blocks[block_of.at(p)].vertices; }
};

// Same as below with the board's isthmus tree for k = vacancy supplied.
inline RangeAnalysis analyze_ranges(const Configuration& c, IsthmusTree tree) {
  if (tree.k != c.vacancy()) throw InputError("isthmus tree was built for a different vacancy");
  RangeAnalysis ra;
  ra.tree = std::move(tree);
  const Mask full = c.board().full_mask();
  for (PebbleId p = 0; p < c.pebble_count(); ++p) {
    auto [gathered, moves] = gather_holes(c, p);
    Mask others = 0;
    for (PebbleId q = 0; q < c.pebble_count(); ++q)
      if (q != p) others |= bit(gathered.position(q));
    auto b = ra.tree.block_containing(full & ~others);
    check_internal(b.has_value(), "gathered set lies in a k-block");
    ra.block_of.push_back(*b);
  }
  return ra;
}

inline RangeAnalysis analyze_ranges(const Configuration& c, const EnumerationLimits& limits = {}) {
  return analyze_ranges(c, isthmus_tree(c.board(), c.vacancy(), limits));
}

inline VertexSet reachable_range(const Configuration& c, PebbleId p, const EnumerationLimits& limits = {}) {
  if (p >= c.pebble_count()) throw InputError("unknown pebble id");
  return analyze_ranges(c, limits).range(p);
}

// Pebbles whose range is block b, in traversal order of the cycle G[b].
inline std::vector<PebbleId> cyclic_pebble_order(const Configuration& c, const RangeAnalysis& ra, std::size_t b) {
  const VertexSet& block = ra.tree.blocks.at(b).vertices;
  const Graph sub = induced_subgraph(c.board(), block);
  check_internal(is_cycle(sub), "cyclic order requested on a cycle block");
  std::vector<PebbleId> out;
  for (Vertex local : cycle_order(sub)) {
    if (auto p = c.occupant(block[local]); p && ra.block_of[*p] == b) out.push_back(*p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contact.

inline bool can_contact(const Configuration& c, const RangeAnalysis& ra, PebbleId p, PebbleId q) {
  if (p == q) throw InputError("can_contact needs two distinct pebbles");
  if (p >= c.pebble_count() || q >= c.pebble_count()) throw InputError("unknown pebble id");
  const std::size_t bp = ra.block_of[p], bq = ra.block_of[q];
  if (bp == bq) {
    const Graph sub = induced_subgraph(c.board(), ra.range(p));
    if (!is_cycle(sub)) return true;
    const auto order = cyclic_pebble_order(c, ra, bp);
    const auto ip = std::find(order.begin(), order.end(), p) - order.begin();
    const auto iq = std::find(order.begin(), order.end(), q) - order.begin();
    const auto n = static_cast<std::ptrdiff_t>(order.size());
    return (ip + 1) % n == iq || (iq + 1) % n == ip;
  }
  const VertexSet shared = set_intersection(ra.range(p), ra.range(q));
  return shared.size() == c.vacancy() && isthmus_on_set(c.board(), shared).has_value();
}

inline bool can_contact(const Configuration& c, PebbleId p, PebbleId q, const EnumerationLimits& limits = {}) {
  return can_contact(c, analyze_ranges(c, limits), p, q);
}

// ---------------------------------------------------------------------------
// Permutation groups of single-hole puzzles.

// theta(a1, a2, a3): two degree-3 vertices joined by internally disjoint
// paths with a1, a2, a3 inner vertices. Labels "u", "v", "t<i>_<j>".
inline Graph theta_graph(std::size_t a1, std::size_t a2, std::size_t a3) {
  std::vector<std::string> labels{"u", "v"};
  std::vector<Graph::LabelEdge> edges;
  const std::array<std::size_t, 3> lens{a1, a2, a3};
  for (std::size_t i = 0; i < 3; ++i) {
    if (lens[i] == 0) throw InputError("theta graph paths need at least one inner vertex");
    std::string prev = "u";
    for (std::size_t j = 0; j < lens[i]; ++j) {
      std::string name = "t" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      labels.push_back(name);
      edges.emplace_back(prev, name);
      prev = name;
    }
    edges.emplace_back(prev, "v");
  }
  return Graph(labels, edges);
}

inline bool is_theta122(const Graph& g) {
  if (g.size() != 7 || g.edge_count() != 8) return false;
  std::vector<Vertex> hubs;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.degree(v) == 3) hubs.push_back(v);
    else if (g.degree(v) != 2) return false;
  }
  if (hubs.size() != 2 || g.adjacent(hubs[0], hubs[1])) return false;
  const Mask rest = g.full_mask() & ~bit(hubs[0]) & ~bit(hubs[1]);
  std::vector<int> sizes;
  for (Mask comp : mask_components(g, rest)) {
    Mask touch = 0;
    for (Mask m = comp; m; m &= m - 1) touch |= g.neighbor_mask(static_cast<Vertex>(std::countr_zero(m)));
    if (!(touch & bit(hubs[0])) || !(touch & bit(hubs[1]))) return false;
    sizes.push_back(std::popcount(comp));
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes == std::vector<int>{1, 2, 2};
}

using Permutation = std::vector<Vertex>;  // image of each board vertex

inline int permutation_parity(const Permutation& sigma) {
  std::vector<char> seen(sigma.size(), 0);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = sigma[j]) seen[j] = 1;
  }
  return static_cast<int>((sigma.size() - cycles) % 2);
}

inline Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

inline Permutation inverse(const Permutation& sigma) {
  Permutation out(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) out[sigma[i]] = static_cast<Vertex>(i);
  return out;
}

// Permutations sigma of V(board) fixing `hole` such that any placement with
// the hole at `hole` can be moved to sigma o placement.
struct GeneratedGroup {
  Graph board;
  Vertex hole = 0;
  std::vector<Permutation> elements;  // sorted

  std::size_t order() const { return elements.size(); }
  bool contains(const Permutation& sigma) const {
    return std::binary_search(elements.begin(), elements.end(), sigma);
  }
};

inline GeneratedGroup generated_group(const Graph& board, Vertex hole, std::size_t max_states = 10'000'000) {
  if (board.size() < 2 || !board.fits_mask() || !mask_connected(board, board.full_mask()))
    throw InputError("generated_group needs a connected board with at least two vertices");
  if (hole >= board.size()) throw InputError("generated_group: hole vertex out of range");
  const std::size_t n = board.size();
  std::size_t states = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    states *= i;
    if (states > max_states)
      throw CapacityError("generated_group: " + std::to_string(n) + "! states exceed the cap of " +
                          std::to_string(max_states));
  }
  // Pebble i starts on vertex i; the hole pebble index n-1 is implicit.
  std::vector<Vertex> start;
  for (Vertex v = 0; v < n; ++v)
    if (v != hole) start.push_back(v);
  const Mask region = board.full_mask();
  const detail::SearchKey root = detail::encode(region & ~bit(hole), start);
  detail::SearchMap seen;
  seen.emplace(root, detail::SearchRecord{root, 0, 0, true});
  std::vector<detail::SearchKey> frontier{root};
  GeneratedGroup group{board, hole, {}};
  auto record = [&](const detail::SearchKey& key) {
    if (key.occupied & bit(hole)) return;
    Permutation sigma(n);
    sigma[hole] = hole;
    for (std::size_t i = 0; i < start.size(); ++i) sigma[start[i]] = detail::tracked_at(key, i);
    group.elements.push_back(std::move(sigma));
  };
  record(root);
  while (!frontier.empty()) {
    std::vector<detail::SearchKey> next;
    for (const auto& key : frontier) {
      detail::expand(board, region, start.size(), key, [&](const detail::SearchKey& child, Vertex, Vertex) {
        if (seen.emplace(child, detail::SearchRecord{key, 0, 0, false}).second) {
          record(child);
          next.push_back(child);
        }
      });
    }
    frontier = std::move(next);
  }
  std::sort(group.elements.begin(), group.elements.end());
  return group;
}

inline GeneratedGroup build_group_theta122() {
  Graph theta = theta_graph(1, 2, 2);
  GeneratedGroup group = generated_group(theta, theta.vertex("u"));
  check_internal(group.order() == 120, "theta(1,2,2) puzzle group has order 6!/6");
  return group;
}

// ---------------------------------------------------------------------------
// Equivalence.

// Configuration with a hole routed to x along a shortest path.
inline Configuration route_hole_to(const Configuration& c, Vertex x) {
  if (x >= c.board().size()) throw InputError("route_hole_to: vertex out of range");
  detail::Work w(c);
  w.pull_hole_to(x);
  return detail::finish(c, w);
}

// sigma restricted to block \ {x}: the vertex where fx's occupant of y sits
// in gx. Both configurations must have x unoccupied. Returns nullopt when the
// two placements do not hold the same pebbles on the block.
inline std::optional<Permutation> hole_routed_permutation(const Configuration& fx, const Configuration& gx,
                                                          const VertexSet& block, Vertex x) {
  check_internal(!(fx.occupied_mask() & bit(x)) && !(gx.occupied_mask() & bit(x)), "hole sits at x");
  Permutation sigma(fx.board().size());
  for (Vertex v = 0; v < sigma.size(); ++v) sigma[v] = v;
  for (Vertex y : block) {
    if (y == x) continue;
    auto p = fx.occupant(y);
    if (!p) return std::nullopt;
    const Vertex to = gx.position(*p);
    if (!block.contains(to) || to == x) return std::nullopt;
    sigma[y] = to;
  }
  return sigma;
}

inline void require_same_pebbles(const Configuration& a, const Configuration& b) {
  if (!(a.board() == b.board())) throw InputError("configurations are on different boards");
  if (a.pebbles() != b.pebbles()) throw InputError("configurations have different pebble sets");
}

// Same as below with the range analyses of both configurations supplied.
inline bool configurations_equivalent(const Configuration& c1, const RangeAnalysis& r1, const Configuration& c2,
                                      const RangeAnalysis& r2, const SearchLimits& limits = {}) {
  require_same_pebbles(c1, c2);
  if (c1 == c2) return true;
  if (r1.block_of != r2.block_of) return false;

  std::vector<std::size_t> used = r1.block_of;
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (std::size_t b : used) {
    const VertexSet& block = r1.tree.blocks[b].vertices;
    const Graph sub = induced_subgraph(c1.board(), block);
    if (is_cycle(sub)) {
      if (!same_cyclic_sequence(cyclic_pebble_order(c1, r1, b), cyclic_pebble_order(c2, r2, b))) return false;
      continue;
    }
    if (c1.vacancy() != 1) continue;
    const bool theta = is_theta122(sub);
    if (!theta && !is_bipartite(sub)) continue;
    const Vertex x = block.front();
    const auto sigma = hole_routed_permutation(route_hole_to(c1, x), route_hole_to(c2, x), block, x);
    if (!sigma) return false;
    if (theta) {
      // Group of G[block] with the hole at x, in block-local indices.
      const GeneratedGroup group = generated_group(sub, 0, limits.max_states);
      Permutation local(block.size());
      for (std::size_t i = 0; i < block.size(); ++i) {
        const Vertex image = (*sigma)[block[i]];
        local[i] = static_cast<Vertex>(std::lower_bound(block.begin(), block.end(), image) - block.begin());
      }
      if (!group.contains(local)) return false;
    } else if (permutation_parity(*sigma) != 0) {
      return false;
    }
  }
  return true;
}

inline bool configurations_equivalent(const Configuration& c1, const Configuration& c2,
                                      const SearchLimits& limits = {}) {
  require_same_pebbles(c1, c2);
  if (c1 == c2) return true;
  return configurations_equivalent(c1, analyze_ranges(c1, limits.enumeration), c2,
                                   analyze_ranges(c2, limits.enumeration), limits);
}

// ---------------------------------------------------------------------------
// Planning.

namespace detail {

inline std::vector<Vertex> tracked_positions(const Work& w, const std::vector<PebbleId>& pebbles) {
  std::vector<Vertex> out;
  for (PebbleId p : pebbles) out.push_back(w.at(p));
  return out;
}

inline std::vector<PebbleId> pebbles_in(const Work& w, Mask region) {
  std::vector<PebbleId> out;
  for (PebbleId p = 0; p < w.positions().size(); ++p)
    if (region & bit(w.at(p))) out.push_back(p);
  return out;
}

// Vacate every vertex of `target` using moves inside `region`; returns the
// vertex moves applied.
inline std::vector<VertexMove> vacate(Work& w, Mask region, Mask target, std::size_t cap) {
  const Mask occ = w.occupied_mask() & region;
  auto moves = search_forward(w.graph(), region, occ, {}, [&](const SearchKey& k) { return !(k.occupied & target); },
                              cap);
  if (!moves) throw LogicError("holes cannot be routed onto the requested isthmus");
  w.apply(*moves);
  return *moves;
}

// Moves inside `region` taking `cur` to `goal` (same pebbles on the region).
// Leaf blocks of the isthmus tree are settled one at a time: both sides park
// their holes on the leaf's isthmus, the leaf is rearranged, and the rest of
// the board is solved recursively.
inline void solve_region(Work& cur, Work goal, Mask region, const SearchLimits& limits) {
  const Graph& g = cur.graph();
  const std::vector<PebbleId> mine = pebbles_in(cur, region);
  if (mine != pebbles_in(goal, region)) throw LogicError("configurations are not equivalent");
  if (tracked_positions(cur, mine) == tracked_positions(goal, mine)) return;
  const std::size_t k = static_cast<std::size_t>(std::popcount(region)) - mine.size();
  if (k == 0) throw LogicError("configurations are not equivalent");

  const VertexSet members = VertexSet::from_mask(region);
  const Graph sub = induced_subgraph(g, members);
  const IsthmusTree tree = isthmus_tree(sub, k, limits.enumeration);
  auto lift = [&](const VertexSet& local) {
    Mask m = 0;
    for (Vertex v : local) m |= bit(members[v]);
    return m;
  };

  if (tree.blocks.size() == 1) {
    auto moves = search_between(g, region, cur.occupied_mask() & region, tracked_positions(cur, mine),
                                goal.occupied_mask() & region, tracked_positions(goal, mine), limits.max_states);
    if (!moves) throw LogicError("configurations are not equivalent");
    cur.apply(*moves);
    return;
  }

  std::size_t leaf = tree.blocks.size();
  for (std::size_t b = 0; b < tree.blocks.size() && leaf == tree.blocks.size(); ++b)
    if (tree.isthmuses_of_block(b).size() == 1) leaf = b;
  check_internal(leaf < tree.blocks.size(), "isthmus tree with two blocks has a leaf block");
  const Mask block = lift(tree.blocks[leaf].vertices);
  const Mask isthmus = lift(tree.isthmuses[tree.isthmuses_of_block(leaf).front()].vertices);

  vacate(cur, region, isthmus, limits.max_states);
  const std::vector<VertexMove> detour = vacate(goal, region, isthmus, limits.max_states);

  const Mask inner = block & ~isthmus;
  const std::vector<PebbleId> leaf_pebbles = pebbles_in(cur, inner);
  if (leaf_pebbles != pebbles_in(goal, inner)) throw LogicError("configurations are not equivalent");
  auto moves = search_between(g, block, cur.occupied_mask() & block, tracked_positions(cur, leaf_pebbles),
                              goal.occupied_mask() & block, tracked_positions(goal, leaf_pebbles),
                              limits.max_states);
  if (!moves) throw LogicError("configurations are not equivalent");
  cur.apply(*moves);

  solve_region(cur, goal, region & ~inner, limits);
  for (auto it = detour.rbegin(); it != detour.rend(); ++it) cur.slide(it->second, it->first);
}

}  // namespace detail

// A legal move sequence from `from` to `to`. Throws LogicError when the two
// configurations are not equivalent.
inline MovePlan move_plan(const Configuration& from, const Configuration& to, const SearchLimits& limits = {}) {
  require_same_pebbles(from, to);
  if (!configurations_equivalent(from, to, limits)) throw LogicError("configurations are not equivalent");
  detail::Work cur(from);
  detail::solve_region(cur, detail::Work(to), from.board().full_mask(), limits);
  MovePlan plan{from, cur.moves()};
  check_internal(plan.replay() == to, "move plan reaches its target");
  return plan;
}

// Shortest move sequence after which p and q sit on adjacent vertices.
inline std::optional<MovePlan> plan_contact(const Configuration& c, PebbleId p, PebbleId q,
                                            const SearchLimits& limits = {}) {
  if (p == q || p >= c.pebble_count() || q >= c.pebble_count()) throw InputError("plan_contact: bad pebble pair");
  const Graph& g = c.board();
  auto moves = detail::search_forward(
      g, g.full_mask(), c.occupied_mask(), {c.position(p), c.position(q)},
      [&](const detail::SearchKey& k) { return g.adjacent(detail::tracked_at(k, 0), detail::tracked_at(k, 1)); },
      limits.max_states);
  if (!moves) return std::nullopt;
  detail::Work w(c);
  w.apply(*moves);
  return MovePlan{c, w.moves()};
}

// Shortest move sequence after which p stands on a vertex of `target`.
inline std::optional<MovePlan> plan_reach(const Configuration& c, PebbleId p, const VertexSet& target,
                                          const SearchLimits& limits = {}) {
  if (p >= c.pebble_count()) throw InputError("plan_reach: unknown pebble");
  require_subset(c.board(), target);
  const Mask t = target.mask();
  auto moves = detail::search_forward(
      c.board(), c.board().full_mask(), c.occupied_mask(), {c.position(p)},
      [&](const detail::SearchKey& k) { return (t & bit(detail::tracked_at(k, 0))) != 0; }, limits.max_states);
  if (!moves) return std::nullopt;
  detail::Work w(c);
  w.apply(*moves);
  return MovePlan{c, w.moves()};
}

}  // namespace agentarr
