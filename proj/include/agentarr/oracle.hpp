#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agentarr/arrangement.hpp"
#include "agentarr/errors.hpp"
#include "agentarr/graph.hpp"
#include "agentarr/isthmus.hpp"
#include "agentarr/pebble.hpp"

// Brute-force state spaces. Nothing here calls the decision procedures of
// the other modules; connectivity and legality are re-derived from adjacency
// lists so the two sides can be checked against each other.
namespace agentarr::oracle {

inline constexpr std::size_t kDefaultCap = 10'000'000;

struct StateSpaceReport {
  std::size_t state_count = 0;
  std::size_t component_count = 0;
  std::vector<std::size_t> component_sizes;
};

namespace detail {

// Plain BFS connectivity over adjacency lists, independent of the mask helpers.
inline bool connected_over(const Graph& g, const std::vector<Vertex>& members) {
  if (members.size() <= 1) return true;
  std::vector<char> in(g.size(), 0), seen(g.size(), 0);
  for (Vertex v : members) in[v] = 1;
  std::vector<Vertex> stack{members.front()};
  seen[members.front()] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(u))
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == members.size();
}

inline std::size_t component_count_over(const Graph& g, const std::vector<Vertex>& members) {
  std::vector<char> in(g.size(), 0), seen(g.size(), 0);
  for (Vertex v : members) in[v] = 1;
  std::size_t comps = 0;
  for (Vertex s : members) {
    if (seen[s]) continue;
    ++comps;
    std::vector<Vertex> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(u))
        if (in[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return comps;
}

inline std::vector<Vertex> members_of(std::uint64_t m) {
  std::vector<Vertex> out;
  for (Vertex v = 0; m; ++v, m >>= 1)
    if (m & 1) out.push_back(v);
  return out;
}

// Connected-component labels of an undirected state graph given by an
// adjacency callback; labels are assigned in order of the first state.
template <typename Neighbours>
std::vector<std::size_t> label_components(std::size_t n, Neighbours&& neighbours, std::size_t& count) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, none);
  count = 0;
  std::vector<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != none) continue;
    label[s] = count;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head)
      neighbours(queue[head], [&](std::size_t t) {
        if (label[t] == none) {
          label[t] = count;
          queue.push_back(t);
        }
      });
    ++count;
  }
  return label;
}

}  // namespace detail

// All placements of m labelled pebbles on a board, with move edges.
class PuzzleSpace {
 public:
  PuzzleSpace(Graph board, std::size_t m, std::size_t cap = kDefaultCap) : board_(std::move(board)), m_(m) {
    const std::size_t n = board_.size();
    if (n == 0 || detail::component_count_over(board_, detail::members_of(board_.full_mask())) != 1)
      throw InputError("puzzle board must be connected and nonempty");
    if (m == 0 || m >= n) throw InputError("pebble count must be between 1 and |V| - 1");
    if (n > 63) throw CapacityError("puzzle boards above 63 vertices are not supported");
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
      total *= n - i;
      if (total > cap)
        throw CapacityError("puzzle space exceeds the state cap of " + std::to_string(cap));
    }
    // States in lexicographic order of the position tuple.
    std::vector<Vertex> pos(m);
    std::vector<char> used(n, 0);
    states_.reserve(total);
    enumerate(pos, used, 0);
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);

    component_ = detail::label_components(
        states_.size(), [&](std::size_t s, auto&& visit) { for_each_neighbour(s, visit); }, component_count_);
    reach_.assign(component_count_ * m_, 0);
    contact_.assign(component_count_ * m_ * m_, 0);
    for (std::size_t s = 0; s < states_.size(); ++s) {
      const std::size_t c = component_[s];
      const auto p = decode(states_[s]);
      for (std::size_t i = 0; i < m_; ++i) {
        reach_[c * m_ + i] |= std::uint64_t{1} << p[i];
        for (std::size_t j = 0; j < m_; ++j)
          if (i != j && board_.adjacent(p[i], p[j])) contact_[(c * m_ + i) * m_ + j] = 1;
      }
    }
  }

  const Graph& board() const { return board_; }
  std::size_t pebble_count() const { return m_; }
  std::size_t state_count() const { return states_.size(); }
  std::size_t component_count() const { return component_count_; }
  std::vector<Vertex> state(std::size_t s) const { return decode(states_.at(s)); }

  std::size_t index_of(const std::vector<Vertex>& positions) const {
    auto it = index_.find(encode(positions));
    if (it == index_.end()) throw InputError("not a placement of this puzzle space");
    return it->second;
  }
  std::size_t component_of(const std::vector<Vertex>& positions) const { return component_[index_of(positions)]; }

  // Vertices pebble i visits within the component of `positions`.
  std::uint64_t reach(const std::vector<Vertex>& positions, std::size_t i) const {
    return reach_[component_of(positions) * m_ + i];
  }

  bool can_contact(const std::vector<Vertex>& positions, std::size_t i, std::size_t j) const {
    return contact_[(component_of(positions) * m_ + i) * m_ + j] != 0;
  }

  bool feasible() const { return component_count_ == 1; }

  // Every pebble reaches every vertex without leaving its component.
  bool transitive() const {
    const std::uint64_t full = board_.full_mask();
    return std::all_of(reach_.begin(), reach_.end(), [full](std::uint64_t r) { return r == full; });
  }

  StateSpaceReport report() const {
    StateSpaceReport r{states_.size(), component_count_, std::vector<std::size_t>(component_count_, 0)};
    for (std::size_t c : component_) ++r.component_sizes[c];
    return r;
  }

  // Shortest move sequence between two placements, as (pebble, vertex) pairs.
  std::optional<std::vector<std::pair<std::size_t, Vertex>>> path(const std::vector<Vertex>& from,
                                                                 const std::vector<Vertex>& to) const {
    const std::size_t s = index_of(from), t = index_of(to);
    if (component_[s] != component_[t]) return std::nullopt;
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(states_.size(), none);
    parent[s] = s;
    std::vector<std::size_t> queue{s};
    for (std::size_t head = 0; head < queue.size() && parent[t] == none; ++head)
      for_each_neighbour(queue[head], [&](std::size_t x) {
        if (parent[x] == none) {
          parent[x] = queue[head];
          queue.push_back(x);
        }
      });
    std::vector<std::pair<std::size_t, Vertex>> steps;
    for (std::size_t cur = t; cur != s; cur = parent[cur]) {
      const auto a = decode(states_[parent[cur]]), b = decode(states_[cur]);
      for (std::size_t i = 0; i < m_; ++i)
        if (a[i] != b[i]) steps.emplace_back(i, b[i]);
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  }

 private:
  std::uint64_t encode(const std::vector<Vertex>& p) const {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < p.size(); ++i) code = code * board_.size() + p[i];
    return code;
  }
  std::vector<Vertex> decode(std::uint64_t code) const {
    std::vector<Vertex> p(m_);
    for (std::size_t i = m_; i-- > 0;) {
      p[i] = static_cast<Vertex>(code % board_.size());
      code /= board_.size();
    }
    return p;
  }

  void enumerate(std::vector<Vertex>& pos, std::vector<char>& used, std::size_t i) {
    if (i == m_) {
      states_.push_back(encode(pos));
      return;
    }
    for (Vertex v = 0; v < board_.size(); ++v) {
      if (used[v]) continue;
      used[v] = 1;
      pos[i] = v;
      enumerate(pos, used, i + 1);
      used[v] = 0;
    }
  }

  template <typename Visit>
  void for_each_neighbour(std::size_t s, Visit&& visit) const {
    auto p = decode(states_[s]);
    std::vector<char> occupied(board_.size(), 0);
    for (Vertex v : p) occupied[v] = 1;
    for (std::size_t i = 0; i < m_; ++i) {
      const Vertex from = p[i];
      for (Vertex w : board_.neighbors(from)) {
        if (occupied[w]) continue;
        p[i] = w;
        visit(index_.at(encode(p)));
        p[i] = from;
      }
    }
  }

  Graph board_;
  std::size_t m_;
  std::vector<std::uint64_t> states_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::size_t> component_;
  std::size_t component_count_ = 0;
  std::vector<std::uint64_t> reach_;
  std::vector<char> contact_;
};

inline StateSpaceReport puz_components(const Graph& board, std::size_t m, std::size_t cap = kDefaultCap) {
  return PuzzleSpace(board, m, cap).report();
}

// All arrangements of (ga, gm) with an edge for every legal transfer.
class ArrangementSpace {
 public:
  ArrangementSpace(std::shared_ptr<const Graph> ga, std::shared_ptr<const Graph> gm, Mode mode,
                   std::size_t cap = kDefaultCap)
      : ga_(std::move(ga)), gm_(std::move(gm)), mode_(mode) {
    const std::size_t na = ga_->size(), nm = gm_->size();
    if (na == 0 || nm == 0) throw InputError("arrangement space needs nonempty graphs");
    // Candidate guard: the raw assignment count must itself be enumerable.
    double candidates = 1;
    for (std::size_t i = 0; i < na; ++i) candidates *= static_cast<double>(nm);
    if (candidates > 64.0 * static_cast<double>(cap) || na > 20 || nm > 64)
      throw CapacityError("arrangement space: " + std::to_string(nm) + "^" + std::to_string(na) +
                          " candidate assignments exceed the enumeration guard");
    const std::uint64_t total = static_cast<std::uint64_t>(candidates);
    std::vector<Vertex> at(na, 0);
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t c = code;
      for (std::size_t i = na; i-- > 0;) {
        at[i] = static_cast<Vertex>(c % nm);
        c /= nm;
      }
      if (!valid(at)) continue;
      if (codes_.size() == cap)
        throw CapacityError("arrangement space exceeds the state cap of " + std::to_string(cap));
      index_.emplace(code, codes_.size());
      codes_.push_back(code);
    }
    component_ = detail::label_components(
        codes_.size(), [&](std::size_t s, auto&& visit) { for_each_neighbour(s, visit); }, component_count_);
  }

  Mode mode() const { return mode_; }
  std::size_t state_count() const { return codes_.size(); }
  std::size_t component_count() const { return component_count_; }
  std::vector<Vertex> state(std::size_t s) const { return decode(codes_.at(s)); }

  std::size_t index_of(const std::vector<Vertex>& at) const {
    auto it = index_.find(encode(at));
    if (it == index_.end()) throw InputError("not an arrangement of this space");
    return it->second;
  }
  std::size_t component_of(const std::vector<Vertex>& at) const { return component_[index_of(at)]; }
  std::size_t component_of_state(std::size_t s) const { return component_.at(s); }

  bool same_component(const Arrangement& f, const Arrangement& g) const {
    return component_of(f.assignment()) == component_of(g.assignment());
  }

  StateSpaceReport report() const {
    StateSpaceReport r{codes_.size(), component_count_, std::vector<std::size_t>(component_count_, 0)};
    for (std::size_t c : component_) ++r.component_sizes[c];
    return r;
  }

  // Transfer legality re-derived from the definition.
  bool legal(const std::vector<Vertex>& at, std::uint64_t moved, Vertex s, Vertex t) const {
    if (!gm_->adjacent(s, t) || moved == 0) return false;
    std::vector<Vertex> u, rest, target;
    bool residue = false;
    for (Vertex a = 0; a < at.size(); ++a) {
      const bool in_u = (moved >> a) & 1;
      if (in_u && at[a] != s) return false;
      if (in_u) u.push_back(a);
      else if (at[a] == s) rest.push_back(a), residue = true;
      else if (at[a] == t) target.push_back(a), residue = true;
    }
    if (mode_ == Mode::aap && !residue) return false;
    std::vector<Vertex> after = target;
    after.insert(after.end(), u.begin(), u.end());
    return detail::connected_over(*ga_, u) && detail::connected_over(*ga_, rest) &&
           detail::connected_over(*ga_, after);
  }

 private:
  std::uint64_t encode(const std::vector<Vertex>& at) const {
    std::uint64_t code = 0;
    for (Vertex c : at) code = code * gm_->size() + c;
    return code;
  }
  std::vector<Vertex> decode(std::uint64_t code) const {
    std::vector<Vertex> at(ga_->size());
    for (std::size_t i = at.size(); i-- > 0;) {
      at[i] = static_cast<Vertex>(code % gm_->size());
      code /= gm_->size();
    }
    return at;
  }

  bool valid(const std::vector<Vertex>& at) const {
    for (Vertex c = 0; c < gm_->size(); ++c) {
      std::vector<Vertex> group;
      for (Vertex a = 0; a < at.size(); ++a)
        if (at[a] == c) group.push_back(a);
      if (!detail::connected_over(*ga_, group)) return false;
    }
    return true;
  }

  template <typename Visit>
  void for_each_neighbour(std::size_t s, Visit&& visit) const {
    std::vector<Vertex> at = decode(codes_[s]);
    for (Vertex from = 0; from < gm_->size(); ++from) {
      std::uint64_t here = 0;
      for (Vertex a = 0; a < at.size(); ++a)
        if (at[a] == from) here |= std::uint64_t{1} << a;
      if (!here) continue;
      for (Vertex to : gm_->neighbors(from)) {
        // Every nonempty subset of the agents on `from`.
        for (std::uint64_t u = here; u; u = (u - 1) & here) {
          if (!legal(at, u, from, to)) continue;
          std::vector<Vertex> next = at;
          for (Vertex a = 0; a < at.size(); ++a)
            if ((u >> a) & 1) next[a] = to;
          visit(index_.at(encode(next)));
        }
      }
    }
  }

  std::shared_ptr<const Graph> ga_, gm_;
  Mode mode_;
  std::vector<std::uint64_t> codes_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::size_t> component_;
  std::size_t component_count_ = 0;
};

inline StateSpaceReport arrangement_space(const Graph& ga, const Graph& gm, Mode mode, std::size_t cap = kDefaultCap) {
  return ArrangementSpace(std::make_shared<const Graph>(ga), std::make_shared<const Graph>(gm), mode, cap).report();
}

inline bool is_almighty(const Graph& ga, const Graph& gm, Mode mode, std::size_t cap = kDefaultCap) {
  return arrangement_space(ga, gm, mode, cap).component_count == 1;
}

// k-blocks straight from the definition over all 2^n vertex subsets.
inline std::vector<Block> blocks_by_brute_force(const Graph& g, std::size_t k) {
  const std::size_t n = g.size();
  if (n > 16) throw CapacityError("blocks_by_brute_force is limited to 16 vertices");
  if (n == 0) throw InputError("blocks_by_brute_force: graph is empty");
  if (k == 0) throw InputError("blocks_by_brute_force: k must be positive");

  // Reached set from `from` inside `members`, by DFS over adjacency lists.
  auto reach = [&](const std::vector<char>& members, std::vector<Vertex> from) {
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack = from;
    for (Vertex v : from) seen[v] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v))
        if (members[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    return seen;
  };

  // Does G[s] contain a k-vertex path I and a split X | Y of the rest such
  // that every X-Y path of G[s] visits every vertex of I?
  auto has_isthmus = [&](const std::vector<Vertex>& s) {
    if (s.size() < k + 2) return false;
    std::vector<char> in(n, 0), on(n, 0);
    for (Vertex v : s) in[v] = 1;
    std::vector<Vertex> path;
    bool found = false;
    auto check = [&]() {
      std::vector<Vertex> rest;
      for (Vertex v : s)
        if (!on[v]) rest.push_back(v);
      // X and Y are unions of components of G[s] - V(I).
      std::vector<char> outside(n, 0);
      for (Vertex v : rest) outside[v] = 1;
      std::vector<int> comp(n, -1);
      int comps = 0;
      for (Vertex v : rest) {
        if (comp[v] >= 0) continue;
        const auto r = reach(outside, {v});
        for (Vertex w : rest)
          if (r[w]) comp[w] = comps;
        ++comps;
      }
      if (comps < 2) return false;
      for (std::uint32_t split = 1; split + 1 < (1u << comps); split += 2) {
        bool ok = true;
        for (Vertex w : path) {
          std::vector<char> without = in;
          without[w] = 0;
          std::vector<Vertex> xs;
          for (Vertex v : rest)
            if ((split >> comp[v]) & 1u) xs.push_back(v);
          const auto r = reach(without, xs);
          for (Vertex v : rest)
            if (!((split >> comp[v]) & 1u) && r[v]) ok = false;
          if (!ok) break;
        }
        if (ok) return true;
      }
      return false;
    };
    auto dfs = [&](auto&& self, Vertex v) -> void {
      if (found) return;
      path.push_back(v);
      on[v] = 1;
      if (path.size() == k) found = check();
      else
        for (Vertex w : g.neighbors(v))
          if (in[w] && !on[w]) self(self, w);
      on[v] = 0;
      path.pop_back();
    };
    for (Vertex v : s) dfs(dfs, v);
    return found;
  };

  std::vector<std::uint64_t> qualifying;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    const auto s = detail::members_of(m);
    if (detail::component_count_over(g, s) != 1) continue;
    if (!has_isthmus(s)) qualifying.push_back(m);
  }
  std::vector<Block> out;
  for (std::uint64_t m : qualifying) {
    const bool maximal = std::none_of(qualifying.begin(), qualifying.end(),
                                      [m](std::uint64_t o) { return o != m && (m & ~o) == 0; });
    if (maximal) out.push_back(Block{VertexSet(detail::members_of(m))});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace agentarr::oracle
