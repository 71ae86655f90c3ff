#include <gtest/gtest.h>

#include <map>
#include <set>
#include <random>

#include "budgeted_efx/certify.hpp"
#include "budgeted_efx/efx_two.hpp"
#include "budgeted_efx/errors.hpp"
#include "budgeted_efx/io.hpp"
#include "support.hpp"

using namespace budgeted_efx;
using testing_support::r;
using testing_support::t1;

namespace {

FeasibilityGraph hand_graph(std::vector<std::vector<bool>> edges,
                            std::vector<std::vector<Rational>> values) {
  FeasibilityGraph g;
  g.agents = {0, 1};
  for (std::size_t b = 0; b < edges[0].size(); ++b) {
    g.bundles.push_back({"B" + std::to_string(b), Bundle{}});
  }
  g.edges = std::move(edges);
  g.vmax = std::move(values);
  g.threshold = {r(0), r(0)};
  return g;
}

// Independent edge rule: v^max of the bundle against v^max of every bundle
// with one good removed, all by subset enumeration.
bool brute_edge(const Instance& inst, AgentId i, const std::vector<Bundle>& bundles,
                std::size_t target) {
  const Rational own = testing_support::brute_knapsack(inst, i, bundles[target], inst.budget(i)).value;
  for (const Bundle& b : bundles) {
    for (GoodId g : b) {
      if (testing_support::brute_knapsack(inst, i, b.without(g), inst.budget(i)).value > own) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST(FeasibilityGraph, T1SplitGraphIsComplete) {
  const Instance inst = t1();
  const std::vector<AgentId> agents{1, 0};
  const auto graph = build_feasibility_graph(inst, agents, {{"X1", Bundle{2}}, {"X2'", Bundle{0}}, {"X2''", Bundle{1}}});
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_EQ(graph.degree(a), 3U);
    EXPECT_EQ(graph.threshold[a], r(0));
  }
  EXPECT_EQ(graph.vmax[0][0], r(1));
  EXPECT_EQ(graph.vmax[1][0], r(0));
  EXPECT_EQ(graph.index_of(0), 1U);
  EXPECT_THROW(graph.index_of(2), PreconditionError);
}

TEST(FeasibilityGraph, RejectsOverlap) {
  const Instance inst = t1();
  const std::vector<AgentId> agents{0, 1};
  EXPECT_THROW(build_feasibility_graph(inst, agents, {{"A", Bundle{0, 1}}, {"B", Bundle{1}}}),
               PreconditionError);
}

TEST(FeasibilityGraph, EdgesMatchDefinition) {
  std::mt19937_64 rng(59);
  testing_support::RandomSpec spec;
  spec.m_min = 0;
  spec.m_max = 8;
  spec.zero_cost_probability = 0.1;
  for (int trial = 0; trial < 300; ++trial) {
    spec.fractional = trial % 3 == 0;
    const Instance inst = testing_support::random_instance(rng, spec);
    std::vector<Bundle> parts(3);
    for (GoodId g = 0; g < inst.num_goods(); ++g) parts[rng() % 3].insert(g);
    std::vector<LabeledBundle> labeled;
    for (const Bundle& b : parts) labeled.push_back({"P", b});
    const std::vector<AgentId> agents{0, 1};
    const auto graph = build_feasibility_graph(inst, agents, labeled);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        ASSERT_EQ(graph.has_edge(a, b), brute_edge(inst, agents[a], parts, b)) << trial;
      }
    }
  }
}

TEST(Matching, PriorityAgentGetsHerBestEdge) {
  // Agent 0 is joined to B1 and B2 and prefers B1; agent 1 only to B2.
  const auto graph = hand_graph({{false, true, true}, {false, false, true}},
                                {{r(0), r(3), r(2)}, {r(0), r(0), r(5)}});
  const auto m = select_perfect_matching(graph, 0, 1);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->priority_bundle, 1U);
  EXPECT_EQ(m->secondary_bundle, 2U);
}

TEST(Matching, SecondaryAgentBreaksPriorityTies) {
  const auto graph = hand_graph({{true, true, false}, {true, true, true}},
                                {{r(2), r(2), r(0)}, {r(1), r(4), r(3)}});
  const auto m = select_perfect_matching(graph, 0, 1);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->priority_bundle, 0U);
  EXPECT_EQ(m->secondary_bundle, 1U);
}

TEST(Matching, NoneWhenBothOnlyReachTheSameBundle) {
  const auto graph = hand_graph({{true, false, false}, {true, false, false}},
                                {{r(1), r(0), r(0)}, {r(1), r(0), r(0)}});
  EXPECT_FALSE(select_perfect_matching(graph, 0, 1).has_value());
  EXPECT_FALSE(select_perfect_matching(graph, 1, 0).has_value());
}

TEST(Matching, AlwaysFindsOneWhenBothHaveTwoEdges) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::vector<bool>> edges(2, std::vector<bool>(3, false));
    std::vector<std::vector<Rational>> values(2, std::vector<Rational>(3));
    for (std::size_t a = 0; a < 2; ++a) {
      const std::size_t skip = rng() % 3;
      for (std::size_t b = 0; b < 3; ++b) {
        edges[a][b] = b != skip || rng() % 2 == 0;
        values[a][b] = r(static_cast<std::int64_t>(rng() % 5));
      }
    }
    const auto graph = hand_graph(edges, values);
    const auto m = select_perfect_matching(graph, 1, 0);
    ASSERT_TRUE(m.has_value()) << trial;
    ASSERT_NE(m->priority_bundle, m->secondary_bundle);
    ASSERT_TRUE(edges[1][m->priority_bundle] && edges[0][m->secondary_bundle]);
    // No perfect matching gives the priority agent more.
    for (std::size_t pb = 0; pb < 3; ++pb) {
      for (std::size_t sb = 0; sb < 3; ++sb) {
        if (pb == sb || !edges[1][pb] || !edges[0][sb]) continue;
        ASSERT_LE(values[1][pb], values[1][m->priority_bundle]);
      }
    }
  }
}

TEST(EfxTwo, T1TraceFromOptimum) {
  const Instance inst = t1();
  const Allocation opt(inst, {Bundle{0, 1}, Bundle{2}});
  const TwoAgentResult res = efx_2a(inst, {0, 1}, opt);
  EXPECT_EQ(res.trace.branch, TwoAgentBranch::kLeximinSplit);
  EXPECT_EQ(res.trace.envier, 1U);
  EXPECT_EQ(res.trace.envied, 0U);
  EXPECT_TRUE(res.trace.relabeled);
  ASSERT_TRUE(res.trace.split.has_value());
  EXPECT_EQ(res.trace.split->first, Bundle{0});
  EXPECT_EQ(res.trace.split->second, Bundle{1});
  EXPECT_EQ(res.allocation.bundle(0), Bundle{0});
  EXPECT_EQ(res.allocation.bundle(1), Bundle{1});
  EXPECT_EQ(res.unallocated_r, Bundle{2});
  EXPECT_TRUE(res.leftout_rprime.empty());
  EXPECT_EQ(nsw_product(inst, res.allocation), r(11, 20));
  EXPECT_TRUE(certify_two_agent(inst, {0, 1}, opt, res).all_pass());
}

TEST(EfxTwo, EfxInputIsReturnedUnchanged) {
  const Instance inst = t1();
  const Allocation input(inst, {Bundle{0}, Bundle{1}});
  const TwoAgentResult res = efx_2a(inst, {0, 1}, input);
  EXPECT_EQ(res.trace.branch, TwoAgentBranch::kAlreadyEfx);
  EXPECT_EQ(res.allocation, input);
}

TEST(EfxTwo, EmptyEnvierSplitsTheOtherBundle) {
  const Instance inst({r(1), r(1), r(1), r(1)},
                      {{r(2), {r(4), r(3), r(2), r(1)}}, {r(4), {r(1), r(1), r(1), r(1)}}});
  const Allocation input(inst, {Bundle{}, Bundle{0, 1, 2, 3}});
  const TwoAgentResult res = efx_2a(inst, {0, 1}, input);
  EXPECT_EQ(res.trace.branch, TwoAgentBranch::kLeximinSplit);
  EXPECT_EQ(res.trace.envier, 0U);
  EXPECT_TRUE(testing_support::brute_is_efx(inst, res.allocation));
  EXPECT_TRUE(is_budget_feasible(inst, res.allocation));
  EXPECT_TRUE(certify_two_agent(inst, {0, 1}, input, res).all_pass());
}

TEST(EfxTwo, RejectsBadInput) {
  const Instance inst = t1();
  EXPECT_THROW(efx_2a(inst, {0, 0}, Allocation::empty(inst)), PreconditionError);
  EXPECT_THROW(efx_2a(inst, {0, 1}, Allocation(inst, {Bundle{0, 1, 2}, Bundle{}})),
               PreconditionError);
}

TEST(EfxTwo, OtherAgentsAreUntouched) {
  const Instance inst({r(1), r(1), r(1), r(1)}, {{r(3), {r(1), r(5), r(1), r(1)}},
                                                 {r(3), {r(9), r(9), r(9), r(9)}},
                                                 {r(3), {r(0), r(0), r(4), r(4)}}});
  const Allocation input(inst, {Bundle{1}, Bundle{0}, Bundle{2, 3}});
  const TwoAgentResult res = efx_2a(inst, {0, 2}, input);
  EXPECT_EQ(res.allocation.bundle(1), Bundle{0});
  EXPECT_TRUE(certify_two_agent(inst, {0, 2}, input, res).all_pass());
}

// The per-agent value bounds and the halved product are not guaranteed
// under budgets (see the pinned cases below), so they are counted here, not
// asserted. Everything else is.
TEST(EfxTwo, RandomSeedsCertifyAndCoverEveryBranch) {
  std::mt19937_64 rng(67);
  testing_support::RandomSpec spec;
  spec.m_min = 1;
  spec.m_max = 9;
  spec.budget_min = 2;
  spec.budget_max = 25;
  spec.zero_cost_probability = 0.05;
  const std::set<std::string> unproven{"value-guarantee", "half-product"};
  std::map<TwoAgentBranch, int> seen;
  std::map<std::string, int> misses;
  int dry = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    spec.fractional = trial % 5 == 0;
    const Instance inst = testing_support::random_instance(rng, spec);
    const Allocation input = testing_support::random_feasible_allocation(rng, inst);
    TwoAgentResult res;
    try {
      res = efx_2a(inst, {0, 1}, input);
    } catch (const InvariantViolation&) {
      ++dry;
      continue;
    }
    ++seen[res.trace.branch];
    for (const Check& check : certify_two_agent(inst, {0, 1}, input, res).checks) {
      if (unproven.count(check.name) != 0) {
        misses[check.name] += check.pass ? 0 : 1;
      } else {
        ASSERT_TRUE(check.pass) << trial << ": " << check.name << " " << check.detail;
      }
    }
    ASSERT_TRUE(testing_support::brute_is_efx(inst, res.allocation)) << trial;
    ASSERT_TRUE(is_budget_feasible(inst, res.allocation)) << trial;
    ASSERT_EQ(efx_2a(inst, {1, 0}, input).allocation, res.allocation) << trial;
  }
  for (auto branch : {TwoAgentBranch::kAlreadyEfx, TwoAgentBranch::kMutualSwap,
                      TwoAgentBranch::kRemovalLoop, TwoAgentBranch::kLeximinSplit}) {
    EXPECT_GT(seen[branch], 0) << to_string(branch);
  }
  // Rare, but not absent.
  EXPECT_LT(dry + misses["value-guarantee"], 20);
  RecordProperty("removal_loop_ran_dry", dry);
  RecordProperty("value_guarantee_misses", misses["value-guarantee"]);
  RecordProperty("half_product_misses", misses["half-product"]);
}

namespace {

struct OptSeeded {
  Instance inst;
  Allocation opt;
};

OptSeeded load_seeded(const std::string& name) {
  const Instance inst = load_instance(testing_support::data_dir() / name);
  const std::vector<AgentId> agents{0, 1};
  return {inst, max_nsw_allocation(inst, agents, inst.all_goods())};
}

}  // namespace

// Both agents keep a single edge to the same bundle, first X2 and then R,
// until X2 is empty. The halves of X2 are each worth more than half of it
// under v^max, so the envier never becomes feasible with her own bundle.
TEST(EfxTwoCounterexample, RemovalLoopRunsDryOnOptimumSeed) {
  const auto [inst, opt] = load_seeded("efx2_removal_runs_dry.json");
  EXPECT_EQ(opt.bundle(0), Bundle{1});
  EXPECT_EQ(opt.bundle(1), (Bundle{0, 2, 3}));
  EXPECT_TRUE(efx_envies(inst, r(4), 0, opt.bundle(1)));
  EXPECT_FALSE(efx_envies(inst, r(18), 1, opt.bundle(0)));
  EXPECT_GE(r(2) * r(4), vmax(inst, 0, opt.bundle(1)));
  EXPECT_THROW(efx_2a(inst, {0, 1}, opt), InvariantViolation);
}

TEST(EfxTwoCounterexample, EnviedAgentKeepsLessThanHalf) {
  const auto [inst, opt] = load_seeded("efx2_envied_below_half.json");
  EXPECT_EQ(opt.bundle(0), Bundle{1});
  EXPECT_EQ(opt.bundle(1), (Bundle{0, 2, 3}));
  const TwoAgentResult res = efx_2a(inst, {0, 1}, opt);
  EXPECT_EQ(res.trace.branch, TwoAgentBranch::kRemovalLoop);
  EXPECT_EQ(res.trace.envier, 0U);
  EXPECT_EQ(res.allocation.bundle(0), Bundle{0});
  EXPECT_EQ(res.allocation.bundle(1), Bundle{3});
  // Envied agent: 24 before, 10 after.
  EXPECT_EQ(bundle_value(inst, 1, res.allocation.bundle(1)), r(10));
  EXPECT_LT(r(2) * r(10), r(24));
  EXPECT_TRUE(is_efx(inst, res.allocation));
  const Certificate cert = certify_two_agent(inst, {0, 1}, opt, res);
  EXPECT_FALSE(cert.find("value-guarantee")->pass);
  EXPECT_TRUE(cert.find("half-product")->pass);
}

TEST(EfxTwoCounterexample, ProductFallsBelowHalfOfOptimum) {
  const auto [inst, opt] = load_seeded("efx2_product_below_half.json");
  EXPECT_EQ(nsw_product(inst, opt), r(216));
  const TwoAgentResult res = efx_2a(inst, {0, 1}, opt);
  EXPECT_EQ(res.trace.branch, TwoAgentBranch::kRemovalLoop);
  EXPECT_EQ(res.trace.envier, 1U);
  EXPECT_EQ(res.allocation.bundle(0), Bundle{2});
  EXPECT_EQ(res.allocation.bundle(1), Bundle{0});
  EXPECT_EQ(nsw_product(inst, res.allocation), r(90));
  EXPECT_TRUE(is_efx(inst, res.allocation));
  EXPECT_FALSE(certify_two_agent(inst, {0, 1}, opt, res).find("half-product")->pass);
  // EFx allocations with more welfare do exist here.
  EXPECT_GT(best_allocation_under_predicate(inst, FairnessPredicate::kEfx).product, r(108));
}
