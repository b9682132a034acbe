#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "agentarr/errors.hpp"
#include "agentarr/graph.hpp"

namespace agentarr {

// An induced k-vertex path I splitting the other vertices into X and Y so
// that every X-Y path visits all of I. For k >= 2 inner vertices of I have no
// other neighbours, X hangs from one end of I and Y from the other.
struct Isthmus {
  std::vector<Vertex> path;  // canonical direction: path.front() < path.back()
  VertexSet vertices;
  std::vector<VertexSet> components;  // of G - V(path), ordered by smallest vertex
  VertexSet x;                        // components.front() and those on its end
  VertexSet y;                        // the rest

  std::size_t k() const { return path.size(); }
  friend bool operator==(const Isthmus& a, const Isthmus& b) { return a.path == b.path; }
};

struct Block {
  VertexSet vertices;
  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block& a, const Block& b) { return a.vertices <=> b.vertices; }
};

struct EnumerationLimits {
  std::size_t max_vertices = 20;
};

// Bipartite block/isthmus containment graph; a tree for every connected graph.
struct IsthmusTree {
  std::size_t k = 0;
  std::vector<Block> blocks;
  std::vector<Isthmus> isthmuses;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (block index, isthmus index)

  std::size_t node_count() const { return blocks.size() + isthmuses.size(); }

  std::vector<std::size_t> isthmuses_of_block(std::size_t b) const {
    std::vector<std::size_t> out;
    for (const auto& [bi, ii] : edges)
      if (bi == b) out.push_back(ii);
    return out;
  }

  std::vector<std::size_t> blocks_of_isthmus(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& [bi, ii] : edges)
      if (ii == i) out.push_back(bi);
    return out;
  }

  // Index of the unique block containing s, if any.
  std::optional<std::size_t> block_containing(Mask s) const {
    std::optional<std::size_t> found;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if ((s & ~blocks[b].vertices.mask()) == 0) {
        check_internal(!found, "a connected (k+1)-set lies in at most one block");
        found = b;
      }
    }
    return found;
  }

  std::optional<std::size_t> block_index(const VertexSet& s) const {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (blocks[b].vertices == s) return b;
    return std::nullopt;
  }
};

namespace detail {

inline void require_connected_nonempty(const Graph& g, const char* op) {
  if (g.size() == 0) throw InputError(std::string(op) + ": graph is empty");
  if (!g.fits_mask()) throw CapacityError(std::string(op) + ": graphs above 64 vertices are not supported");
  if (!mask_connected(g, g.full_mask())) throw InputError(std::string(op) + ": graph is disconnected");
}

template <typename Visit>
void connected_subsets_rec(const Graph& g, Mask s, Mask ext, Mask excluded, std::size_t size, std::size_t max_size,
                           Visit& visit) {
  visit(s);
  if (size == max_size) return;
  while (ext) {
    const Mask w = ext & (~ext + 1);
    ext ^= w;
    const Mask grown = s | w;
    const Mask next = (ext | g.neighbor_mask(static_cast<Vertex>(std::countr_zero(w)))) & ~(grown | excluded);
    connected_subsets_rec(g, grown, next, excluded, size + 1, max_size, visit);
    excluded |= w;
  }
}

// Each nonempty connected subset of G[within] with at most max_size vertices,
// exactly once.
template <typename Visit>
void for_each_connected_subset(const Graph& g, Mask within, std::size_t max_size, Visit visit) {
  for (Mask rest = within; rest; rest &= rest - 1) {
    const Vertex v = static_cast<Vertex>(std::countr_zero(rest));
    const Mask below = (bit(v) << 1) - 1;
    const Mask excluded = below | ~within;
    connected_subsets_rec(g, bit(v), g.neighbor_mask(v) & ~excluded, excluded, 1, max_size, visit);
  }
}

// Vertices of G[t] in path order, smaller end first, if G[t] is an induced
// path.
inline std::optional<std::vector<Vertex>> induced_path_order(const Graph& g, Mask t) {
  if (t == 0 || !mask_connected(g, t)) return std::nullopt;
  const int k = std::popcount(t);
  int edges = 0;
  std::optional<Vertex> start;
  for (Mask m = t; m; m &= m - 1) {
    const Vertex v = static_cast<Vertex>(std::countr_zero(m));
    const int d = std::popcount(g.neighbor_mask(v) & t);
    if (d > 2) return std::nullopt;
    edges += d;
    if (d <= 1 && !start) start = v;
  }
  if (edges / 2 != k - 1 || !start) return std::nullopt;
  std::vector<Vertex> order{*start};
  Mask left = t & ~bit(*start);
  while (left) {
    const Mask next = g.neighbor_mask(order.back()) & left;
    order.push_back(static_cast<Vertex>(std::countr_zero(next)));
    left &= ~next;
  }
  return order;
}

// Components of G[within] - V(path) with the end each one hangs from (0 for
// path.front(), 1 for path.back()), if every path between the two ends' sides
// runs through all of `path`. The path must be induced.
struct Split {
  std::vector<Mask> components;  // ordered by smallest vertex
  std::vector<int> side;
};

inline std::optional<Split> isthmus_split(const Graph& g, Mask within, const std::vector<Vertex>& path) {
  Mask t = 0;
  for (Vertex v : path) t |= bit(v);
  for (std::size_t i = 1; i + 1 < path.size(); ++i)
    if (g.neighbor_mask(path[i]) & within & ~t) return std::nullopt;
  Split out;
  out.components = mask_components(g, within & ~t);
  if (out.components.size() < 2) return std::nullopt;
  bool front = false, back = false;
  for (Mask c : out.components) {
    Mask touch = 0;
    for (Mask m = c; m; m &= m - 1) touch |= g.neighbor_mask(static_cast<Vertex>(std::countr_zero(m)));
    touch &= t;
    if (path.size() == 1 || (touch & ~bit(path.front())) == 0) {
      out.side.push_back(0);
      front = true;
    } else if ((touch & ~bit(path.back())) == 0) {
      out.side.push_back(1);
      back = true;
    } else {
      return std::nullopt;
    }
  }
  if (path.size() > 1 && !(front && back)) return std::nullopt;
  return out;
}

inline Isthmus make_isthmus(std::vector<Vertex> path, const Split& split) {
  Isthmus iso;
  iso.vertices = VertexSet(path);
  for (Mask c : split.components) iso.components.push_back(VertexSet::from_mask(c));
  // X: the first component, together with every component on its side.
  for (std::size_t i = 0; i < split.components.size(); ++i) {
    const bool with_first = path.size() == 1 ? i == 0 : split.side[i] == split.side[0];
    VertexSet& side = with_first ? iso.x : iso.y;
    side = set_union(side, iso.components[i]);
  }
  if (path.front() > path.back()) std::reverse(path.begin(), path.end());
  iso.path = std::move(path);
  return iso;
}

}  // namespace detail

// The isthmus given by `path`: a split of the other vertices into X and Y
// such that every X-Y path of g runs through all of `path`.
inline std::optional<Isthmus> is_k_isthmus(const Graph& g, std::span<const Vertex> path) {
  detail::require_connected_nonempty(g, "is_k_isthmus");
  if (path.empty()) throw InputError("is_k_isthmus: empty path");
  Mask used = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= g.size()) throw InputError("is_k_isthmus: vertex index out of range");
    if (used & bit(path[i])) throw InputError("is_k_isthmus: path repeats vertex '" + g.label(path[i]) + "'");
    used |= bit(path[i]);
    if (i > 0 && !g.adjacent(path[i - 1], path[i]))
      throw InputError("is_k_isthmus: '" + g.label(path[i - 1]) + "' and '" + g.label(path[i]) +
                       "' are not adjacent");
  }
  // A chord lets a route skip part of the path.
  if (!detail::induced_path_order(g, used)) return std::nullopt;
  std::vector<Vertex> p(path.begin(), path.end());
  auto split = detail::isthmus_split(g, g.full_mask(), p);
  if (!split) return std::nullopt;
  return detail::make_isthmus(std::move(p), *split);
}

// The isthmus with vertex set s, if there is one.
inline std::optional<Isthmus> isthmus_on_set(const Graph& g, const VertexSet& s) {
  detail::require_connected_nonempty(g, "isthmus_on_set");
  require_subset(g, s);
  auto order = detail::induced_path_order(g, s.mask());
  if (!order) return std::nullopt;
  return is_k_isthmus(g, *order);
}

// All k-isthmuses, one per vertex set, ordered by vertex set.
inline std::vector<Isthmus> all_k_isthmuses(const Graph& g, std::size_t k) {
  detail::require_connected_nonempty(g, "all_k_isthmuses");
  if (k == 0) throw InputError("all_k_isthmuses: k must be positive");
  std::vector<Isthmus> out;
  if (k + 2 > g.size()) return out;
  std::vector<VertexSet> sets;
  detail::for_each_connected_subset(g, g.full_mask(), k, [&](Mask t) {
    if (static_cast<std::size_t>(std::popcount(t)) == k && detail::induced_path_order(g, t))
      sets.push_back(VertexSet::from_mask(t));
  });
  std::sort(sets.begin(), sets.end());
  for (const auto& s : sets)
    if (auto iso = isthmus_on_set(g, s)) out.push_back(std::move(*iso));
  return out;
}

// All k-blocks: maximal connected sets whose induced subgraph has no
// k-isthmus of itself. Definitional enumeration over connected subsets.
inline std::vector<Block> all_k_blocks(const Graph& g, std::size_t k, const EnumerationLimits& limits = {}) {
  detail::require_connected_nonempty(g, "all_k_blocks");
  if (k == 0) throw InputError("all_k_blocks: k must be positive");
  if (g.size() > limits.max_vertices)
    throw CapacityError("all_k_blocks: graph has " + std::to_string(g.size()) +
                        " vertices, above the subset-enumeration limit of " + std::to_string(limits.max_vertices));
  const Mask full = g.full_mask();
  if (g.size() <= k + 1) return {Block{g.all()}};

  // Induced k-paths: the only possible isthmus vertex sets.
  std::vector<std::pair<Mask, std::vector<Vertex>>> paths;
  std::vector<Mask> subsets;
  detail::for_each_connected_subset(g, full, g.size(), [&](Mask s) {
    subsets.push_back(s);
    if (static_cast<std::size_t>(std::popcount(s)) != k) return;
    if (auto order = detail::induced_path_order(g, s)) paths.emplace_back(s, std::move(*order));
  });
  std::sort(subsets.begin(), subsets.end(), [](Mask a, Mask b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });

  auto has_own_isthmus = [&](Mask s) {
    if (static_cast<std::size_t>(std::popcount(s)) < k + 2) return false;
    for (const auto& [t, order] : paths)
      if ((t & ~s) == 0 && detail::isthmus_split(g, s, order)) return true;
    return false;
  };

  std::vector<Mask> blocks;
  for (Mask s : subsets) {
    const bool covered = std::any_of(blocks.begin(), blocks.end(), [s](Mask b) { return (s & ~b) == 0; });
    if (covered) continue;
    if (!has_own_isthmus(s)) blocks.push_back(s);
  }

  std::vector<Block> out;
  for (Mask b : blocks) out.push_back(Block{VertexSet::from_mask(b)});
  std::sort(out.begin(), out.end());

  // Every connected (k+1)-set lies in exactly one block.
  for (Mask s : subsets) {
    if (static_cast<std::size_t>(std::popcount(s)) != k + 1) continue;
    const auto n = std::count_if(blocks.begin(), blocks.end(), [s](Mask b) { return (s & ~b) == 0; });
    check_internal(n == 1, "connected (k+1)-set lies in exactly one k-block");
  }
  return out;
}

inline IsthmusTree isthmus_tree(const Graph& g, std::size_t k, const EnumerationLimits& limits = {}) {
  IsthmusTree tree;
  tree.k = k;
  tree.blocks = all_k_blocks(g, k, limits);
  tree.isthmuses = all_k_isthmuses(g, k);
  for (std::size_t b = 0; b < tree.blocks.size(); ++b)
    for (std::size_t i = 0; i < tree.isthmuses.size(); ++i)
      if (tree.isthmuses[i].vertices.subset_of(tree.blocks[b].vertices)) tree.edges.emplace_back(b, i);

  // Connected and acyclic.
  const std::size_t nodes = tree.node_count();
  check_internal(tree.edges.size() + 1 == nodes, "isthmus graph has |E| = |V| - 1");
  std::vector<std::size_t> parent(nodes);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t merged = 0;
  for (const auto& [b, i] : tree.edges) {
    const std::size_t rb = root(b), ri = root(tree.blocks.size() + i);
    if (rb != ri) {
      parent[rb] = ri;
      ++merged;
    }
  }
  check_internal(merged + 1 == nodes, "isthmus graph is connected");
  return tree;
}

}  // namespace agentarr
