// Acceptance suite: one PASS/FAIL line per criterion. Every check compares the
// library against an independent computation (state-space BFS, subset
// enumeration, bitmask DP) and tolerates zero disagreements.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "agentarr/agentarr.hpp"
#include "support/sampling.hpp"
#include "support/zoo.hpp"

using namespace agentarr;

namespace
{

struct Outcome
{
  bool pass = true;
  std::string detail;
};

struct Tally
{
  std::size_t checks = 0, bad = 0;
  std::string first;

  void expect(bool ok, const std::function<std::string()>& what)
  {
    ++checks;
    if (ok)
      return;
    if (bad++ == 0)
      first = what();
  }

  Outcome outcome(const std::string& summary) const
  {
    std::ostringstream out;
    out << summary << "; " << checks << " checks, " << bad << " disagreements";
    if (bad)
      out << "; first: " << first;
    return Outcome{bad == 0 && checks > 0, out.str()};
  }
};

std::string describe(const Graph& g)
{
  std::ostringstream out;
  out << "n=" << g.size() << " E={";
  bool first = true;
  for (auto [u, v] : g.edges())
  {
    out << (first ? "" : " ") << g.label(u) << "-" << g.label(v);
    first = false;
  }
  out << "}";
  return out.str();
}

std::shared_ptr<const Graph> share(Graph g)
{
  return std::make_shared<const Graph>(std::move(g));
}

// Independent connectivity by union-find over an edge list.
bool tree_shaped(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
{
  if (nodes == 0 || edges.size() + 1 != nodes)
    return false;
  std::vector<std::size_t> parent(nodes);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  std::size_t merged = 0;
  for (auto [a, b] : edges)
  {
    const std::size_t ra = root(a), rb = root(b);
    if (ra != rb)
    {
      parent[ra] = rb;
      ++merged;
    }
  }
  return merged + 1 == nodes;
}

bool connected_by_bfs(const Graph& g)
{
  if (g.size() == 0)
    return false;
  std::vector<char> seen(g.size(), 0);
  std::vector<Vertex> queue{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (Vertex w : g.neighbors(queue[i]))
      if (!seen[w])
      {
        seen[w] = 1;
        queue.push_back(w);
      }
  return queue.size() == g.size();
}

// Held-Karp reachability DP; independent of the backtracking search.
bool hamiltonian_by_dp(const Graph& g)
{
  const std::size_t n = g.size();
  if (n < 3)
    return false;
  std::vector<std::uint32_t> ends(std::size_t{1} << n, 0);  // ends[S]: path 0 ~> v covering S
  ends[1] = 1;
  for (std::uint32_t s = 1; s < (1u << n); s += 2)
    for (Vertex v = 0; v < n; ++v)
      if ((ends[s] >> v) & 1u)
        for (Vertex w : g.neighbors(v))
          if (!((s >> w) & 1u))
            ends[s | (1u << w)] |= 1u << w;
  const std::uint32_t full = (1u << n) - 1;
  for (Vertex v : g.neighbors(0))
    if ((ends[full] >> v) & 1u)
      return true;
  return false;
}

// ---------------------------------------------------------------------------

Outcome puzzle_census()
{
  Tally t;
  auto check = [&](const char* name, const Graph& g, std::size_t m, std::size_t want) {
    const std::size_t got = oracle::puz_components(g, m).component_count;
    t.expect(got == want, [&] { return std::string(name) + " gave " + std::to_string(got); });
  };
  check("theta(1,2,2) with 6 pebbles", theta_graph(1, 2, 2), 6, 6);
  check("K_{2,3} with 4 pebbles", zoo::complete_bipartite(2, 3), 4, 2);
  check("K4 with 3 pebbles", zoo::complete(4), 3, 1);
  return t.outcome("theta122 -> 6, K23 -> 2, K4 -> 1");
}

Outcome feasibility_triple()
{
  Tally t;
  std::size_t graphs = 0;
  for (std::size_t n = 3; n <= 7; ++n)
  {
    for (const Graph& g : zoo::connected_graphs(n))
    {
      if (is_cycle(g))
        continue;
      ++graphs;
      for (std::size_t k = 2; k + 1 <= n; ++k)
      {
        const bool no_isthmus = all_k_isthmuses(g, k).empty();
        const oracle::PuzzleSpace space(g, n - k);
        const bool transitive = space.transitive(), feasible = space.feasible();
        t.expect(no_isthmus == transitive && transitive == feasible, [&] {
          return describe(g) + " k=" + std::to_string(k) + " no-isthmus=" + std::to_string(no_isthmus) +
                 " transitive=" + std::to_string(transitive) + " feasible=" + std::to_string(feasible);
        });
      }
    }
  }
  return t.outcome(std::to_string(graphs) + " connected non-cycle graphs on 3..7 vertices");
}

std::vector<Graph> block_corpus()
{
  std::vector<Graph> corpus = zoo::connected_graphs_up_to(6);
  std::mt19937_64 rng(20240601);
  const double density[] = {0.1, 0.2, 0.35, 0.5};
  for (int i = 0; i < 510; ++i)
    corpus.push_back(zoo::random_connected(7 + i % 3, density[i % 4], rng));
  return corpus;
}

Outcome blocks_match_brute_force(const std::vector<Graph>& corpus)
{
  Tally t;
  for (const Graph& g : corpus)
  {
    for (std::size_t k = 1; k < std::max<std::size_t>(g.size(), 2); ++k)
    {
      const auto lib = all_k_blocks(g, k);
      const auto brute = oracle::blocks_by_brute_force(g, k);
      t.expect(lib == brute, [&] { return describe(g) + " k=" + std::to_string(k); });
    }
  }
  return t.outcome(std::to_string(corpus.size()) + " graphs (all connected up to 6 vertices, 510 random on 7..9)");
}

Outcome isthmus_graph_is_tree(const std::vector<Graph>& corpus)
{
  Tally t;
  std::size_t nontrivial = 0;
  for (const Graph& g : corpus)
  {
    for (std::size_t k = 1; k < std::max<std::size_t>(g.size(), 2); ++k)
    {
      const IsthmusTree tree = isthmus_tree(g, k);
      // Containment edges rebuilt from the vertex sets.
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t b = 0; b < tree.blocks.size(); ++b)
        for (std::size_t i = 0; i < tree.isthmuses.size(); ++i)
          if (tree.isthmuses[i].vertices.subset_of(tree.blocks[b].vertices))
            edges.emplace_back(b, tree.blocks.size() + i);
      nontrivial += !tree.isthmuses.empty();
      t.expect(tree_shaped(tree.node_count(), edges) && edges.size() == tree.edges.size(),
               [&] { return describe(g) + " k=" + std::to_string(k); });
    }
  }
  return t.outcome("same corpus, " + std::to_string(nontrivial) + " trees with at least one isthmus");
}

Outcome ranges_contact_equivalence()
{
  Tally t;
  std::mt19937_64 rng(7);
  std::size_t boards = 0, placements = 0;
  for (std::size_t n = 2; n <= 7; ++n)
  {
    for (const Graph& g0 : zoo::connected_graphs(n))
    {
      ++boards;
      auto board = share(g0);
      std::size_t quota = 1000;
      for (std::size_t m = 1; m < n; ++m)
      {
        const oracle::PuzzleSpace space(g0, m);
        const IsthmusTree tree = isthmus_tree(g0, n - m);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < m; ++i)
          names.push_back("p" + std::to_string(i + 1));
        std::vector<std::vector<std::size_t>> by_component(space.component_count());
        for (std::size_t s = 0; s < space.state_count(); ++s)
          by_component[space.component_of(space.state(s))].push_back(s);

        std::vector<std::size_t> chosen(space.state_count());
        std::iota(chosen.begin(), chosen.end(), 0);
        const bool exhaustive = n <= 5;
        if (!exhaustive)
        {
          const std::size_t share_of = (quota + (n - m) - 1) / (n - m);
          const std::size_t take = std::min(space.state_count(), share_of);
          std::shuffle(chosen.begin(), chosen.end(), rng);
          chosen.resize(take);
          quota -= std::min(quota, take);
        }
        std::map<std::size_t, std::pair<Configuration, RangeAnalysis>> memo;
        auto analysed = [&](std::size_t s) -> const std::pair<Configuration, RangeAnalysis>& {
          auto it = memo.find(s);
          if (it == memo.end())
          {
            Configuration c(board, names, space.state(s));
            RangeAnalysis ra = analyze_ranges(c, tree);
            it = memo.emplace(s, std::make_pair(std::move(c), std::move(ra))).first;
          }
          return it->second;
        };

        for (std::size_t s : chosen)
        {
          ++placements;
          const std::vector<Vertex> pos = space.state(s);
          const auto& [c, ra] = analysed(s);
          for (PebbleId i = 0; i < m; ++i)
            t.expect(ra.range(i).mask() == space.reach(pos, i),
                     [&] { return "range " + describe(g0) + " m=" + std::to_string(m); });
          for (PebbleId i = 0; i < m; ++i)
            for (PebbleId j = i + 1; j < m; ++j)
              t.expect(can_contact(c, ra, i, j) == space.can_contact(pos, i, j),
                       [&] { return "contact " + describe(g0) + " m=" + std::to_string(m); });

          std::vector<std::size_t> partners;
          if (exhaustive)
          {
            for (std::size_t o = s; o < space.state_count(); ++o)
              partners.push_back(o);
          }
          else
          {
            const auto& same = by_component[space.component_of(pos)];
            partners.push_back(same[rng() % same.size()]);
            partners.push_back(rng() % space.state_count());
          }
          for (std::size_t o : partners)
          {
            const auto& [d, rd] = analysed(o);
            const bool truth = space.component_of(pos) == space.component_of(space.state(o));
            t.expect(configurations_equivalent(c, ra, d, rd) == truth,
                     [&] { return "equivalence " + describe(g0) + " m=" + std::to_string(m); });
          }
        }
      }
    }
  }
  return t.outcome(std::to_string(boards) + " boards on 2..7 vertices, " + std::to_string(placements) +
                   " placements (exhaustive up to 5 vertices, 1000 per board above)");
}

Outcome equivalence_matches_arrangement_space()
{
  Tally t;
  std::vector<Graph> graphs;
  for (std::size_t n = 1; n <= 4; ++n)
  {
    auto more = zoo::all_graphs(n);
    graphs.insert(graphs.end(), more.begin(), more.end());
  }
  std::size_t pairs = 0, arrangements = 0;
  for (Mode mode : {Mode::aap, Mode::sga})
  {
    for (const Graph& a : graphs)
    {
      for (const Graph& m : graphs)
      {
        auto ga = share(a), gm = share(m);
        const oracle::ArrangementSpace space(ga, gm, mode);
        const std::size_t n = space.state_count();
        arrangements += n;
        std::vector<Arrangement> fs;
        std::vector<IrreducibleResult> irr;
        for (std::size_t s = 0; s < n; ++s)
        {
          fs.emplace_back(ga, gm, space.state(s));
          irr.push_back(irreducible_configuration(fs.back(), mode));
        }
        for (std::size_t i = 0; i < n; ++i)
        {
          for (std::size_t j = i + 1; j < n; ++j)
          {
            ++pairs;
            const bool truth = space.component_of_state(i) == space.component_of_state(j);
            t.expect(t_equivalent(irr[i], irr[j]) == truth, [&] {
              return to_string(mode) + " agents " + describe(a) + " map " + describe(m) + " states " +
                     std::to_string(i) + "," + std::to_string(j);
            });
          }
          const std::size_t j = (i + 1) % n;
          t.expect(t_equivalent(fs[i], fs[j], mode) == (space.component_of_state(i) == space.component_of_state(j)),
                   [&] { return "direct call " + to_string(mode) + " " + describe(a) + " / " + describe(m); });
        }
      }
    }
  }
  return t.outcome(std::to_string(graphs.size()) + "^2 graph pairs x 2 modes, " + std::to_string(arrangements) +
                   " arrangements, " + std::to_string(pairs) + " pairs");
}

Outcome contraction_order_independence()
{
  Tally t;
  std::mt19937_64 rng(10);
  std::size_t instances = 0, contractions = 0;
  while (instances < 120)
  {
    const Mode mode = instances % 2 ? Mode::sga : Mode::aap;
    auto ga = share(zoo::random_connected(3 + rng() % 4, 0.35, rng));
    auto gm = share(zoo::random_connected(4 + rng() % 5, 0.3, rng));
    const Arrangement f = sampling::random_arrangement(ga, gm, rng, 0.25);
    std::vector<IrreducibleResult> runs{irreducible_configuration(f, mode)};
    if (runs[0].contractions.size() < 2)
      continue;  // a single contraction leaves no order to vary
    ++instances;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      runs.push_back(irreducible_configuration(f, mode, ContractionOptions{seed * 7919 + instances, {}}));
    for (const auto& r : runs)
    {
      contractions += r.contractions.size();
      t.expect(!contractible_pair(r.config, r.arrangement).has_value(), [] { return std::string("result reducible"); });
    }
    for (std::size_t i = 0; i < runs.size(); ++i)
      for (std::size_t j = i + 1; j < runs.size(); ++j)
      {
        t.expect(runs[i].config.pebbles == runs[j].config.pebbles, [&] {
          return to_string(mode) + " pebble partitions differ on agents " + describe(*ga) + " map " + describe(*gm);
        });
        t.expect(t_equivalent(runs[i], runs[j]), [&] {
          return to_string(mode) + " irreducible results inequivalent on agents " + describe(*ga) + " map " +
                 describe(*gm);
        });
      }
  }
  return t.outcome(std::to_string(instances) + " instances x 6 contraction orders, " + std::to_string(contractions) +
                   " contractions");
}

Outcome plans_replay()
{
  Tally t;
  std::mt19937_64 rng(13);
  std::size_t plans = 0, steps = 0;
  double worst = 0;
  for (int i = 0; i < 300; ++i)
  {
    const Mode mode = i % 2 ? Mode::sga : Mode::aap;
    auto ga = share(zoo::random_connected(2 + rng() % 5, 0.35, rng));
    auto gm = share(zoo::random_connected(3 + rng() % 6, 0.3, rng));
    const Arrangement f = sampling::random_arrangement(ga, gm, rng, 0.3);
    Arrangement g = i % 3 == 0 ? sampling::random_arrangement(ga, gm, rng, 0.3)
                               : sampling::random_walk(f, mode, 5 + rng() % 30, rng);
    if (!t_equivalent(f, g, mode))
      continue;
    ++plans;
    const TransferPlan plan = transfer_plan(f, g, mode);
    bool ok = true;
    try
    {
      ok = plan.replay() == g;
    }
    catch (const InputError&)
    {
      ok = false;
    }
    t.expect(ok, [&] { return to_string(mode) + " agents " + describe(*ga) + " map " + describe(*gm); });
    steps += plan.steps.size();
    const double scale = double(gm->size()) * double(gm->size()) * double(ga->size());
    worst = std::max(worst, double(plan.steps.size()) / scale);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu plans, %zu transfers, max length / (|V_M|^2 |V_A|) = %.3f", plans, steps, worst);
  return t.outcome(buf);
}

Outcome reduction_at_desk_scale()
{
  Tally t;
  std::mt19937_64 rng(17);
  std::size_t hamiltonian = 0, other = 0, sampled = 0;
  for (std::size_t n = 4; n <= 6; ++n)
  {
    for (const Graph& h : zoo::connected_graphs(n))
    {
      if (!connected_by_bfs(complement(h)))
        continue;
      const GadgetPair gp = almighty_gadget(h);
      const Arrangement target = all_on_p(gp);
      const IrreducibleResult target_irr = irreducible_configuration(target, Mode::aap);
      if (auto cycle = find_hamiltonian_cycle(h))
      {
        ++hamiltonian;
        const Arrangement w = hamiltonian_witness_arrangement(gp, *cycle);
        t.expect(!t_equivalent(irreducible_configuration(w, Mode::aap), target_irr),
                 [&] { return "witness reaches all-on-p for " + describe(h); });
        continue;
      }
      ++other;
      std::vector<Arrangement> fs;
      for (const std::string& which : reduction_cases())
        fs.push_back(proof_case_fixture(gp, which));
      const double join[] = {0.15, 0.4, 0.7, 0.9};
      for (int i = 0; i < 200; ++i)
        fs.push_back(sampling::random_arrangement(gp.ga, gp.gm, rng, join[i % 4]));
      for (const Arrangement& f : fs)
      {
        ++sampled;
        t.expect(separation_holds(gp, f), [&] { return "separation fails for " + describe(h); });
        t.expect(t_equivalent(irreducible_configuration(f, Mode::aap), target_irr), [&] {
          return "case " + reduction_case(gp, f) + " arrangement not equivalent to all-on-p for " + describe(h);
        });
      }
    }
  }
  return t.outcome(std::to_string(hamiltonian) + " Hamiltonian and " + std::to_string(other) +
                   " non-Hamiltonian graphs on 4..6 vertices, " + std::to_string(sampled) +
                   " arrangements (13 fixtures + 200 samples each)");
}

Outcome restricted_transform()
{
  Tally t;
  std::size_t graphs = 0;
  for (std::size_t n = 3; n <= 6; ++n)
  {
    for (const Graph& g : zoo::connected_graphs(n))
    {
      ++graphs;
      const Graph h = restrict_hc(g);
      const bool before = hamiltonian_by_dp(g), after = hamiltonian_by_dp(h);
      t.expect(before == after, [&] { return "Hamiltonicity changed for " + describe(g); });
      t.expect(is_hamiltonian(g) == before && is_hamiltonian(h) == after,
               [&] { return "backtracking and DP disagree on " + describe(g); });
      t.expect(connected_by_bfs(complement(h)), [&] { return "complement disconnected for " + describe(g); });
    }
  }
  return t.outcome(std::to_string(graphs) + " connected graphs on 3..6 vertices");
}

} // namespace

int main()
{
  struct Criterion
  {
    int id;
    const char* name;
    const char* tolerance;
    std::function<Outcome()> run;
    double max_seconds;  // 0: no limit
  };
  const std::vector<Graph> corpus = block_corpus();
  const std::vector<Criterion> criteria{
      {1, "puzzle component census", "exact integers, under 5 s", puzzle_census, 5.0},
      {2, "no isthmus / transitive / feasible agree", "zero disagreements", feasibility_triple, 0},
      {3, "k-blocks match subset enumeration", "exact set equality", [&] { return blocks_match_brute_force(corpus); },
       0},
      {4, "isthmus graph is a tree", "exact", [&] { return isthmus_graph_is_tree(corpus); }, 0},
      {5, "ranges, contact and equivalence match puzzle BFS", "zero disagreements", ranges_contact_equivalence, 0},
      {6, "t-equivalence matches arrangement-space components", "zero disagreements",
       equivalence_matches_arrangement_space, 0},
      {7, "irreducible result independent of contraction order", "zero violations", contraction_order_independence,
       0},
      {8, "transfer plans replay exactly", "zero replay failures", plans_replay, 0},
      {9, "Hamiltonian-cycle reduction at desk scale", "zero violations", reduction_at_desk_scale, 0},
      {10, "restricted Hamiltonicity transform", "exact", restricted_transform, 0},
  };

  int failed = 0;
  for (const Criterion& c : criteria)
  {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception& e)
    {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.max_seconds > 0 && secs > c.max_seconds)
    {
      o.pass = false;
      o.detail += "; too slow";
    }
    std::printf("%s criterion %d: %s [%s] %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, c.tolerance,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
