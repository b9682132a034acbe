#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agentarr/errors.hpp"

namespace agentarr {

using Vertex = std::uint32_t;
using Mask = std::uint64_t;

inline constexpr std::size_t kMaskBits = 64;

constexpr Mask bit(Vertex v) { return Mask{1} << v; }

// Label ordering used everywhere: runs of digits compare numerically, so
// "v2" < "v10" and "3" < "12". Ties fall back to plain string order.
inline bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::string_view ra = a.substr(i, ie - i), rb = b.substr(j, je - j);
      while (ra.size() > 1 && ra.front() == '0') ra.remove_prefix(1);
      while (rb.size() > 1 && rb.front() == '0') rb.remove_prefix(1);
      if (ra.size() != rb.size()) return ra.size() < rb.size();
      if (ra != rb) return ra < rb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

struct NaturalLess {
  bool operator()(std::string_view a, std::string_view b) const { return natural_less(a, b); }
};

// Sorted, duplicate-free set of vertex indices.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> items) : items_(items) { normalize(); }
  explicit VertexSet(std::vector<Vertex> items) : items_(std::move(items)) { normalize(); }

  static VertexSet from_mask(Mask m) {
    VertexSet s;
    while (m) {
      s.items_.push_back(static_cast<Vertex>(std::countr_zero(m)));
      m &= m - 1;
    }
    return s;
  }

  Mask mask() const {
    Mask m = 0;
    for (Vertex v : items_) {
      check_internal(v < kMaskBits, "vertex index fits a 64-bit mask");
      m |= bit(v);
    }
    return m;
  }

  bool contains(Vertex v) const { return std::binary_search(items_.begin(), items_.end(), v); }
  bool subset_of(const VertexSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
  }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  Vertex front() const { return items_.front(); }
  Vertex operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<Vertex>& elements() const { return items_; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet& a, const VertexSet& b) { return a.items_ <=> b.items_; }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }
  std::vector<Vertex> items_;
};

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

// Simple undirected graph with opaque string labels. Vertex indices follow
// natural label order, so index order is the canonical order. Immutable.
class Graph {
 public:
  using LabelEdge = std::pair<std::string, std::string>;
  using IndexEdge = std::pair<Vertex, Vertex>;

  Graph() = default;

  Graph(std::vector<std::string> labels, const std::vector<LabelEdge>& edges) {
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end(), NaturalLess{});
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i] == sorted[i - 1]) throw InputError("duplicate vertex '" + sorted[i] + "'");
    }
    labels_ = std::move(sorted);
    for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], static_cast<Vertex>(i));
    adj_.assign(labels_.size(), {});
    for (const auto& [a, b] : edges) {
      auto ia = find(a), ib = find(b);
      if (!ia) throw InputError("edge endpoint '" + a + "' is not a declared vertex");
      if (!ib) throw InputError("edge endpoint '" + b + "' is not a declared vertex");
      add_edge(*ia, *ib);
    }
    finish();
  }

  // Labels "0".."n-1"; natural order keeps index == numeric label.
  static Graph with_vertex_count(std::size_t n, const std::vector<IndexEdge>& edges) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    std::vector<LabelEdge> named;
    named.reserve(edges.size());
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) throw InputError("edge endpoint out of range");
      named.emplace_back(labels[u], labels[v]);
    }
    return Graph(std::move(labels), named);
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::string& label(Vertex v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Vertex> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Vertex vertex(std::string_view label) const {
    auto v = find(label);
    if (!v) throw InputError("unknown vertex '" + std::string(label) + "'");
    return *v;
  }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }

  bool adjacent(Vertex u, Vertex v) const {
    const auto& n = adj_.at(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  std::vector<IndexEdge> edges() const {
    std::vector<IndexEdge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < adj_.size(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool fits_mask() const { return labels_.size() <= kMaskBits; }

  Mask neighbor_mask(Vertex v) const {
    check_internal(fits_mask(), "graph fits a 64-bit mask");
    return masks_.at(v);
  }

  Mask full_mask() const {
    check_internal(fits_mask(), "graph fits a 64-bit mask");
    return size() == kMaskBits ? ~Mask{0} : (bit(static_cast<Vertex>(size())) - 1);
  }

  VertexSet all() const {
    std::vector<Vertex> v(size());
    for (Vertex i = 0; i < v.size(); ++i) v[i] = i;
    return VertexSet(std::move(v));
  }

  std::vector<std::string> labels_of(const VertexSet& s) const {
    std::vector<std::string> out;
    out.reserve(s.size());
    for (Vertex v : s) out.push_back(label(v));
    return out;
  }

  VertexSet set_of(const std::vector<std::string>& names) const {
    std::vector<Vertex> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(vertex(n));
    return VertexSet(std::move(out));
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.labels_ == b.labels_ && a.adj_ == b.adj_;
  }

 private:
  void add_edge(Vertex u, Vertex v) {
    if (u == v) throw InputError("loop edge at vertex '" + labels_[u] + "'");
    if (std::find(adj_[u].begin(), adj_[u].end(), v) != adj_[u].end())
      throw InputError("duplicate edge '" + labels_[u] + "'-'" + labels_[v] + "'");
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    ++edge_count_;
  }

  void finish() {
    for (auto& n : adj_) std::sort(n.begin(), n.end());
    if (fits_mask()) {
      masks_.assign(size(), 0);
      for (Vertex u = 0; u < size(); ++u)
        for (Vertex v : adj_[u]) masks_[u] |= bit(v);
    }
  }

  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<Mask> masks_;
  std::size_t edge_count_ = 0;
};

// ---------------------------------------------------------------------------
// Mask-level primitives (graphs with at most 64 vertices).

// Vertices of `within` reachable from `from` inside G[within].
inline Mask mask_reach(const Graph& g, Mask from, Mask within) {
  Mask seen = from & within, frontier = seen;
  while (frontier) {
    Mask next = 0;
    for (Mask f = frontier; f; f &= f - 1) next |= g.neighbor_mask(static_cast<Vertex>(std::countr_zero(f)));
    next &= within & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

inline bool mask_connected(const Graph& g, Mask s) {
  if (s == 0) return true;
  return mask_reach(g, s & (~s + 1), s) == s;
}

// Components of G[s], ordered by smallest vertex.
inline std::vector<Mask> mask_components(const Graph& g, Mask s) {
  std::vector<Mask> out;
  while (s) {
    Mask c = mask_reach(g, s & (~s + 1), s);
    out.push_back(c);
    s &= ~c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Label-level operations.

inline void require_subset(const Graph& g, const VertexSet& s) {
  if (!s.empty() && s.elements().back() >= g.size())
    throw InputError("vertex index " + std::to_string(s.elements().back()) + " is not in the graph");
}

// G[s] as a fresh graph. Labels are kept, so index i of the result is the
// i-th element of s.
inline Graph induced_subgraph(const Graph& g, const VertexSet& s) {
  require_subset(g, s);
  std::vector<std::string> labels = g.labels_of(s);
  std::vector<Graph::LabelEdge> edges;
  for (Vertex u : s)
    for (Vertex v : g.neighbors(u))
      if (u < v && s.contains(v)) edges.emplace_back(g.label(u), g.label(v));
  return Graph(std::move(labels), edges);
}

// Components of G[s] in g's indices, ordered by smallest vertex.
inline std::vector<VertexSet> components_within(const Graph& g, const VertexSet& s) {
  require_subset(g, s);
  std::vector<int> comp(g.size(), -1);
  std::vector<VertexSet> out;
  std::vector<char> in(g.size(), 0);
  for (Vertex v : s) in[v] = 1;
  for (Vertex start : s) {
    if (comp[start] != -1) continue;
    const int id = static_cast<int>(out.size());
    std::vector<Vertex> members{start}, stack{start};
    comp[start] = id;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(u)) {
        if (in[w] && comp[w] == -1) {
          comp[w] = id;
          members.push_back(w);
          stack.push_back(w);
        }
      }
    }
    out.emplace_back(std::move(members));
  }
  return out;
}

inline std::vector<VertexSet> connected_components(const Graph& g) { return components_within(g, g.all()); }

inline bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

inline bool is_connected_or_empty(const Graph& g, const VertexSet& s) {
  return s.empty() || components_within(g, s).size() == 1;
}

inline bool is_cycle(const Graph& g) {
  if (g.size() < 3 || g.edge_count() != g.size()) return false;
  for (Vertex v = 0; v < g.size(); ++v)
    if (g.degree(v) != 2) return false;
  return is_connected(g);
}

inline bool is_bipartite(const Graph& g) {
  std::vector<int> side(g.size(), -1);
  for (Vertex s = 0; s < g.size(); ++s) {
    if (side[s] != -1) continue;
    side[s] = 0;
    std::vector<Vertex> stack{s};
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(u)) {
        if (side[w] == -1) {
          side[w] = 1 - side[u];
          stack.push_back(w);
        } else if (side[w] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

inline Graph complement(const Graph& g) {
  std::vector<Graph::LabelEdge> edges;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v)
      if (!g.adjacent(u, v)) edges.emplace_back(g.label(u), g.label(v));
  return Graph(g.labels(), edges);
}

// Vertices of a cycle graph in traversal order: start at vertex 0, step to
// its smaller neighbour first.
inline std::vector<Vertex> cycle_order(const Graph& g) {
  check_internal(is_cycle(g), "cycle_order called on a cycle");
  std::vector<Vertex> order{0};
  Vertex prev = 0, cur = g.neighbors(0).front();
  while (cur != 0) {
    order.push_back(cur);
    const auto& n = g.neighbors(cur);
    Vertex next = n[0] == prev ? n[1] : n[0];
    prev = cur;
    cur = next;
  }
  return order;
}

// True when two sequences are equal up to rotation (not reflection).
template <typename T>
bool same_cyclic_sequence(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (std::size_t shift = 0; shift < b.size(); ++shift) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) ok = a[i] == b[(i + shift) % b.size()];
    if (ok) return true;
  }
  return false;
}

}  // namespace agentarr
