#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <random>

#include "agentarr/arrangement.hpp"
#include "agentarr/errors.hpp"
#include "agentarr/oracle.hpp"
#include "support/sampling.hpp"
#include "support/zoo.hpp"

using namespace agentarr;
using ::testing::HasSubstr;

namespace
{

using Assignment = std::vector<std::pair<std::string, std::string>>;

Graph k2()
{
  return zoo::labelled({{"a", "b"}});
}

Graph edge_st()
{
  return zoo::labelled({{"s", "t"}});
}

Graph path123()
{
  return zoo::labelled({{"1", "2"}, {"2", "3"}});
}

Transfer transfer(const Arrangement& f, std::vector<std::string> agents, const std::string& from,
                  const std::string& to)
{
  return Transfer{f.agents().set_of(agents), f.map().vertex(from), f.map().vertex(to)};
}

std::string where(const Arrangement& f, const std::string& agent)
{
  return f.map().label(f.country(f.agents().vertex(agent)));
}

} // namespace

TEST(ArrangementTest, RejectsInvalidAssignments)
{
  Graph ga = zoo::labelled({{"a", "b"}}, {"c"});
  EXPECT_THROW(Arrangement(ga, path123(), Assignment{{"a", "1"}, {"b", "1"}, {"c", "1"}}), InputError);
  EXPECT_THROW(Arrangement(ga, path123(), Assignment{{"a", "1"}, {"b", "2"}}), InputError);
  EXPECT_THROW(Arrangement(ga, path123(), Assignment{{"a", "1"}, {"b", "2"}, {"c", "9"}}), InputError);
  EXPECT_THROW(Arrangement(Graph{}, path123(), Assignment{}), InputError);
  EXPECT_NO_THROW(Arrangement(ga, path123(), Assignment{{"a", "1"}, {"b", "1"}, {"c", "2"}}));
}

TEST(TransferTest, WorkedExamples)
{
  Arrangement both(k2(), edge_st(), Assignment{{"a", "s"}, {"b", "s"}});

  Arrangement split = apply_transfer(both, transfer(both, {"a"}, "s", "t"), Mode::aap);
  EXPECT_EQ(where(split, "a"), "t");
  EXPECT_EQ(where(split, "b"), "s");

  auto all = transfer(both, {"a", "b"}, "s", "t");
  try
  {
    apply_transfer(both, all, Mode::aap);
    FAIL() << "Residue-free aap transfer accepted.";
  }
  catch (const InputError& e)
  {
    EXPECT_THAT(e.what(), HasSubstr("aap transfer needs an agent remaining"));
  }

  Arrangement moved = apply_transfer(both, all, Mode::sga);
  EXPECT_EQ(where(moved, "a"), "t");
  EXPECT_EQ(where(moved, "b"), "t");
}

TEST(TransferTest, ViolationsNameTheClause)
{
  Graph ga = zoo::labelled({{"a", "b"}, {"b", "c"}});
  Arrangement f(ga, path123(), Assignment{{"a", "1"}, {"b", "1"}, {"c", "1"}});
  EXPECT_THAT(*transfer_violation(f, transfer(f, {"a"}, "1", "3"), Mode::sga), HasSubstr("not adjacent"));
  EXPECT_THAT(*transfer_violation(f, Transfer{VertexSet{}, 0, 1}, Mode::sga), HasSubstr("no agents"));
  EXPECT_THAT(*transfer_violation(f, transfer(f, {"a", "c"}, "1", "2"), Mode::sga), HasSubstr("moved agents"));
  EXPECT_THAT(*transfer_violation(f, transfer(f, {"b"}, "1", "2"), Mode::sga), HasSubstr("remaining in '1'"));
  EXPECT_THAT(*transfer_violation(f, transfer(f, {"a"}, "2", "3"), Mode::sga), HasSubstr("is not in country"));

  Arrangement g(ga, path123(), Assignment{{"a", "1"}, {"b", "2"}, {"c", "2"}});
  EXPECT_FALSE(transfer_violation(g, transfer(g, {"b"}, "2", "1"), Mode::aap).has_value());
  Arrangement h(ga, path123(), Assignment{{"a", "1"}, {"b", "2"}, {"c", "3"}});
  EXPECT_FALSE(transfer_violation(h, transfer(h, {"c"}, "3", "2"), Mode::aap).has_value());
  Graph loose = zoo::labelled({{"a", "b"}}, {"c"});
  Arrangement k(loose, path123(), Assignment{{"a", "1"}, {"b", "2"}, {"c", "3"}});
  EXPECT_THAT(*transfer_violation(k, transfer(k, {"c"}, "3", "2"), Mode::sga), HasSubstr("after the transfer"));
}

TEST(TransferTest, EveryLegalTransferReverses)
{
  for (Mode mode : {Mode::aap, Mode::sga})
  {
    for (std::size_t na = 1; na <= 3; ++na)
    {
      for (const Graph& ga0 : zoo::all_graphs(na))
      {
        for (const Graph& gm0 : zoo::connected_graphs_up_to(3))
        {
          auto ga = std::make_shared<const Graph>(ga0);
          auto gm = std::make_shared<const Graph>(gm0);
          oracle::ArrangementSpace space(ga, gm, mode);
          for (std::size_t i = 0; i < space.state_count(); ++i)
          {
            Arrangement f(ga, gm, space.state(i));
            for (auto [s, t] : gm0.edges())
            {
              for (auto [from, to] : {std::pair{s, t}, std::pair{t, s}})
              {
                for (Mask u = f.preimage_mask(from); u; u = (u - 1) & f.preimage_mask(from))
                {
                  Transfer tr{VertexSet::from_mask(u), from, to};
                  if (transfer_violation(f, tr, mode))
                    continue;
                  Arrangement g = apply_transfer(f, tr, mode);
                  EXPECT_FALSE(transfer_violation(g, tr.reversed(), mode).has_value());
                  EXPECT_EQ(apply_transfer(g, tr.reversed(), mode), f);
                }
              }
            }
          }
        }
      }
    }
  }
}

TEST(SubnetMergerTest, WorkedExamples)
{
  Arrangement both(k2(), edge_st(), Assignment{{"a", "s"}, {"b", "s"}});
  SubnetMerger m = subnet_merger(both, both.map().vertex("s"), both.map().vertex("t"), Mode::aap);
  EXPECT_TRUE(m.is_move);
  ASSERT_EQ(m.transfers.size(), 2u);
  EXPECT_EQ(where(m.result, "a"), "t");
  EXPECT_EQ(where(m.result, "b"), "t");
  EXPECT_EQ((TransferPlan{both, Mode::aap, m.transfers}.replay()), m.result);

  Arrangement apart(k2(), edge_st(), Assignment{{"a", "s"}, {"b", "t"}});
  SubnetMerger p = subnet_merger(apart, apart.map().vertex("s"), apart.map().vertex("t"), Mode::aap);
  EXPECT_FALSE(p.is_move);
  EXPECT_EQ(p.transfers.size(), 1u);
  EXPECT_EQ(where(p.result, "a"), "t");

  Graph loose = zoo::labelled({}, {"a", "b"});
  Arrangement split(loose, edge_st(), Assignment{{"a", "s"}, {"b", "t"}});
  EXPECT_THROW(subnet_merger(split, split.map().vertex("s"), split.map().vertex("t"), Mode::aap), InputError);
}

TEST(SubnetMergerTest, SgaMovesInOneTransfer)
{
  Arrangement both(k2(), edge_st(), Assignment{{"a", "s"}, {"b", "s"}});
  SubnetMerger m = subnet_merger(both, 0, 1, Mode::sga);
  EXPECT_TRUE(m.is_move);
  EXPECT_EQ(m.transfers.size(), 1u);
}

TEST(SubnetMergerTest, VanguardIsLowestNonCutAgent)
{
  // Path b - a - c: a is a cut vertex, b the lowest-labelled non-cut one.
  Graph ga = zoo::labelled({{"a", "b"}, {"a", "c"}});
  EXPECT_EQ(ga.label(vanguard_agent(ga, ga.full_mask())), "b");
}

TEST(AssociatedConfigurationTest, WorkedExamples)
{
  Graph ga = zoo::labelled({{"a", "b"}, {"b", "c"}});
  Arrangement all(ga, path123(), Assignment{{"a", "2"}, {"b", "2"}, {"c", "2"}});
  AssociatedConfiguration one = associated_configuration(all, Mode::aap);
  ASSERT_EQ(one.pebbles.size(), 1u);
  EXPECT_EQ(one.pebbles[0], ga.all());
  EXPECT_TRUE(one.isolated_agents.empty());

  Arrangement apart(k2(), path123(), Assignment{{"a", "1"}, {"b", "3"}});
  AssociatedConfiguration ac = associated_configuration(apart, Mode::aap);
  EXPECT_TRUE(ac.pebbles.empty());
  EXPECT_EQ(ac.isolated_agents, k2().all());
  EXPECT_EQ(apart.map().labels_of(ac.board), (std::vector<std::string>{"2"}));

  Arrangement spread(ga, path123(), Assignment{{"a", "1"}, {"b", "2"}, {"c", "3"}});
  EXPECT_TRUE(associated_configuration(spread, Mode::aap).pebbles.empty());
}

TEST(AssociatedConfigurationTest, SgaKeepsSingletonsAsPebbles)
{
  Arrangement apart(k2(), path123(), Assignment{{"a", "1"}, {"b", "3"}});
  AssociatedConfiguration ac = associated_configuration(apart, Mode::sga);
  EXPECT_EQ(ac.pebbles.size(), 2u);
  EXPECT_TRUE(ac.isolated_agents.empty());
  EXPECT_EQ(ac.board, apart.map().all());
  ASSERT_EQ(ac.pieces.size(), 1u);
  ASSERT_TRUE(ac.pieces[0].config.has_value());
  EXPECT_EQ(ac.pieces[0].config->vacancy(), 1u);
}

TEST(AssociatedConfigurationTest, DisconnectedBoardSplitsIntoPieces)
{
  // Route map 1-2-3-4-5, isolated agent on 3 cuts the board in two.
  Graph gm = zoo::labelled({{"1", "2"}, {"2", "3"}, {"3", "4"}, {"4", "5"}});
  Graph ga = zoo::labelled({{"a", "b"}, {"c", "d"}, {"b", "e"}, {"d", "e"}});
  Arrangement f(ga, gm, Assignment{{"a", "1"}, {"b", "1"}, {"c", "4"}, {"d", "4"}, {"e", "3"}});
  AssociatedConfiguration ac = associated_configuration(f, Mode::aap);
  ASSERT_EQ(ac.pieces.size(), 2u);
  EXPECT_EQ(gm.labels_of(ac.pieces[0].countries), (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(gm.labels_of(ac.pieces[1].countries), (std::vector<std::string>{"4", "5"}));
  EXPECT_FALSE(ac.pieces[0].frozen());
}

TEST(ContractiblePairTest, WorkedExamples)
{
  Arrangement iso(k2(), edge_st(), Assignment{{"a", "s"}, {"b", "t"}});
  auto pair = contractible_pair(associated_configuration(iso, Mode::aap), iso);
  ASSERT_TRUE(pair.has_value());
  EXPECT_EQ(pair->step, "step 1");

  Graph ga = zoo::labelled({{"a", "b"}, {"b", "c"}});
  Arrangement f(ga, edge_st(), Assignment{{"a", "s"}, {"b", "s"}, {"c", "t"}});
  auto p2 = contractible_pair(associated_configuration(f, Mode::aap), f);
  ASSERT_TRUE(p2.has_value());
  EXPECT_EQ(p2->first, ga.set_of({"a", "b"}));
  EXPECT_EQ(p2->second, ga.set_of({"c"}));

  Graph loose = zoo::labelled({{"a", "b"}}, {"c"});
  Arrangement none(loose, edge_st(), Assignment{{"a", "s"}, {"b", "s"}, {"c", "t"}});
  EXPECT_FALSE(contractible_pair(associated_configuration(none, Mode::aap), none).has_value());
}

TEST(IrreducibleTest, WorkedExamples)
{
  Graph ga = zoo::labelled({{"a", "b"}, {"b", "c"}});
  Arrangement all(ga, path123(), Assignment{{"a", "2"}, {"b", "2"}, {"c", "2"}});
  IrreducibleResult r = irreducible_configuration(all, Mode::aap);
  EXPECT_EQ(r.arrangement, all);
  EXPECT_TRUE(r.transfers.empty());

  Arrangement apart(k2(), edge_st(), Assignment{{"a", "s"}, {"b", "t"}});
  IrreducibleResult m = irreducible_configuration(apart, Mode::aap);
  ASSERT_EQ(m.config.pebbles.size(), 1u);
  EXPECT_EQ(m.transfers.size(), 1u);

  Arrangement stuck(k2(), path123(), Assignment{{"a", "1"}, {"b", "3"}});
  IrreducibleResult s = irreducible_configuration(stuck, Mode::aap);
  EXPECT_EQ(s.arrangement, stuck);
  EXPECT_TRUE(s.transfers.empty());
}

TEST(IrreducibleTest, TransfersReplay)
{
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial)
  {
    auto ga = std::make_shared<const Graph>(zoo::random_connected(2 + trial % 4, 0.3, rng));
    auto gm = std::make_shared<const Graph>(zoo::random_connected(3 + trial % 4, 0.3, rng));
    for (Mode mode : {Mode::aap, Mode::sga})
    {
      Arrangement f = sampling::random_arrangement(ga, gm, rng);
      IrreducibleResult r = irreducible_configuration(f, mode);
      EXPECT_EQ((TransferPlan{f, mode, r.transfers}.replay()), r.arrangement);
      EXPECT_FALSE(contractible_pair(r.config, r.arrangement).has_value());
    }
  }
}

TEST(TEquivalenceTest, WorkedExamples)
{
  Graph k1 = zoo::labelled({}, {"a"});
  Graph pq = zoo::labelled({{"p", "q"}});
  Arrangement at_p(k1, pq, Assignment{{"a", "p"}});
  Arrangement at_q(k1, pq, Assignment{{"a", "q"}});
  EXPECT_TRUE(t_equivalent(at_p, at_p, Mode::aap));
  EXPECT_FALSE(t_equivalent(at_p, at_q, Mode::aap));
  EXPECT_TRUE(t_equivalent(at_p, at_q, Mode::sga));
}

TEST(TEquivalenceTest, RejectsDifferentGraphPairs)
{
  Arrangement a(k2(), edge_st(), Assignment{{"a", "s"}, {"b", "s"}});
  Arrangement b(k2(), path123(), Assignment{{"a", "1"}, {"b", "1"}});
  EXPECT_THROW(t_equivalent(a, b, Mode::aap), InputError);
}

TEST(TEquivalenceTest, RandomOrdersAgree)
{
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial)
  {
    auto ga = std::make_shared<const Graph>(zoo::random_connected(3 + trial % 3, 0.4, rng));
    auto gm = std::make_shared<const Graph>(zoo::random_connected(4 + trial % 3, 0.3, rng));
    for (Mode mode : {Mode::aap, Mode::sga})
    {
      Arrangement f = sampling::random_arrangement(ga, gm, rng);
      IrreducibleResult base = irreducible_configuration(f, mode);
      for (std::uint64_t seed = 1; seed <= 5; ++seed)
      {
        IrreducibleResult other = irreducible_configuration(f, mode, ContractionOptions{seed, {}});
        EXPECT_EQ(other.config.pebbles, base.config.pebbles);
        EXPECT_TRUE(t_equivalent(base, other));
      }
    }
  }
}

TEST(TransferPlanTest, WorkedExamples)
{
  Arrangement both_s(k2(), edge_st(), Assignment{{"a", "s"}, {"b", "s"}});
  Arrangement both_t(k2(), edge_st(), Assignment{{"a", "t"}, {"b", "t"}});
  EXPECT_TRUE(transfer_plan(both_s, both_s, Mode::aap).steps.empty());
  TransferPlan plan = transfer_plan(both_s, both_t, Mode::aap);
  EXPECT_EQ(plan.replay(), both_t);
  EXPECT_LE(plan.steps.size(), 4u);
}

TEST(TransferPlanTest, RejectsInequivalentPairs)
{
  Graph k1 = zoo::labelled({}, {"a"});
  Graph pq = zoo::labelled({{"p", "q"}});
  Arrangement at_p(k1, pq, Assignment{{"a", "p"}});
  Arrangement at_q(k1, pq, Assignment{{"a", "q"}});
  EXPECT_THROW(transfer_plan(at_p, at_q, Mode::aap), LogicError);
}

TEST(TransferPlanTest, RandomEquivalentPairsReplay)
{
  std::mt19937_64 rng(29);
  int planned = 0;
  for (int trial = 0; trial < 80; ++trial)
  {
    auto ga = std::make_shared<const Graph>(zoo::random_connected(2 + trial % 3, 0.4, rng));
    auto gm = std::make_shared<const Graph>(zoo::random_connected(3 + trial % 3, 0.3, rng));
    for (Mode mode : {Mode::aap, Mode::sga})
    {
      Arrangement f = sampling::random_arrangement(ga, gm, rng);
      Arrangement g = sampling::random_arrangement(ga, gm, rng);
      if (!t_equivalent(f, g, mode))
        continue;
      EXPECT_EQ(transfer_plan(f, g, mode).replay(), g);
      ++planned;
    }
  }
  EXPECT_GT(planned, 20);
}

TEST(TEquivalenceTest, MatchesArrangementSpaceOnTinyPairs)
{
  for (Mode mode : {Mode::aap, Mode::sga})
  {
    for (const Graph& ga0 : zoo::connected_graphs_up_to(3))
    {
      for (const Graph& gm0 : zoo::connected_graphs_up_to(3))
      {
        auto ga = std::make_shared<const Graph>(ga0);
        auto gm = std::make_shared<const Graph>(gm0);
        oracle::ArrangementSpace space(ga, gm, mode);
        for (std::size_t i = 0; i < space.state_count(); ++i)
          for (std::size_t j = i + 1; j < space.state_count(); ++j)
          {
            Arrangement f(ga, gm, space.state(i)), g(ga, gm, space.state(j));
            EXPECT_EQ(t_equivalent(f, g, mode), space.component_of_state(i) == space.component_of_state(j))
                << to_string(mode) << " |A|=" << ga0.size() << " |M|=" << gm0.size();
          }
      }
    }
  }
}

TEST(TransferPlanTest, WalkEndpointsAreEquivalentAndPlanned)
{
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial)
  {
    auto ga = std::make_shared<const Graph>(zoo::random_connected(2 + trial % 4, 0.4, rng));
    auto gm = std::make_shared<const Graph>(zoo::random_connected(3 + trial % 4, 0.3, rng));
    for (Mode mode : {Mode::aap, Mode::sga})
    {
      Arrangement f = sampling::random_arrangement(ga, gm, rng);
      Arrangement g = sampling::random_walk(f, mode, 12, rng);
      ASSERT_TRUE(t_equivalent(f, g, mode));
      EXPECT_EQ(transfer_plan(f, g, mode).replay(), g);
    }
  }
}
