#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "budgeted_efx/model.hpp"
#include "budgeted_efx/oracles.hpp"

namespace budgeted_efx {

struct LabeledBundle {
  std::string label;
  Bundle goods;
};

/// Bipartite agent/bundle graph in which agent a is joined to bundle b when
/// her best affordable part of b is worth at least as much as her best
/// affordable part of any bundle with one good removed. A perfect matching
/// gives an EFx allocation once each agent keeps her favourite affordable
/// subset of her matched bundle.
struct FeasibilityGraph {
  std::vector<AgentId> agents;
  std::vector<LabeledBundle> bundles;
  /// vmax[a][b]: agents[a]'s v^max of bundles[b] under her own budget.
  std::vector<std::vector<Rational>> vmax;
  /// Per agent, the largest v^max of any bundle minus one good.
  std::vector<Rational> threshold;
  std::vector<std::vector<bool>> edges;

  bool has_edge(std::size_t agent_index, std::size_t bundle_index) const {
    return edges[agent_index][bundle_index];
  }
  std::size_t degree(std::size_t agent_index) const;
  /// Index of `agent` in `agents`; throws PreconditionError if absent.
  std::size_t index_of(AgentId agent) const;
};

/// Throws PreconditionError if the bundles overlap.
FeasibilityGraph build_feasibility_graph(const Instance& instance, std::span<const AgentId> agents,
                                         std::vector<LabeledBundle> bundles);

struct PairMatching {
  std::size_t priority_bundle;
  std::size_t secondary_bundle;
};

/// Perfect matching of a two-agent graph maximizing the priority agent's
/// v^max, then the secondary agent's, then preferring the lowest bundle index
/// for the priority agent and then for the secondary one.
std::optional<PairMatching> select_perfect_matching(const FeasibilityGraph& graph,
                                                    AgentId priority_agent,
                                                    AgentId secondary_agent);

enum class TwoAgentBranch { kAlreadyEfx, kMutualSwap, kRemovalLoop, kLeximinSplit };

const char* to_string(TwoAgentBranch branch);

struct TwoAgentTrace {
  TwoAgentBranch branch = TwoAgentBranch::kAlreadyEfx;
  /// The envier is the second agent of the pair.
  bool relabeled = false;
  std::optional<AgentId> envier;
  std::optional<AgentId> envied;
  std::size_t iterations = 0;
  /// Goods moved into R by the removal loop, in removal order.
  std::vector<GoodId> removed;
  std::optional<SplitPair> split;
  /// Bundles of the final graph, with the matched index per pair agent.
  std::vector<LabeledBundle> graph_bundles;
  std::array<std::size_t, 2> matched_index{};
  /// The pair's values in the input allocation.
  std::array<Rational, 2> input_values;
};

struct TwoAgentResult {
  /// The input allocation with the pair's bundles replaced.
  Allocation allocation;
  /// Matched bundles in pair order, before each agent keeps her S^max.
  std::array<Bundle, 2> matched;
  /// The bundle left unmatched (empty unless the graph had three bundles).
  Bundle unallocated_r;
  /// Goods of matched bundles that the holders did not keep.
  Bundle leftout_rprime;
  TwoAgentTrace trace;
};

/// Turns a budget-feasible allocation for the pair into an EFx one. The
/// envier ends with at least her input value, the other agent with at least
/// half of hers, and neither envies the unmatched bundle. Bundles of other
/// agents and goods outside the pair's bundles are left alone.
///
/// Throws PreconditionError if a pair bundle is over budget or the pair
/// repeats an agent.
TwoAgentResult efx_2a(const Instance& instance, std::pair<AgentId, AgentId> pair,
                      const Allocation& input);

}  // namespace budgeted_efx
