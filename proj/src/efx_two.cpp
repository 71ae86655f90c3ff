#include "budgeted_efx/efx_two.hpp"

#include <string>

#include "budgeted_efx/errors.hpp"

namespace budgeted_efx {

std::size_t FeasibilityGraph::degree(std::size_t agent_index) const {
  std::size_t count = 0;
  for (bool e : edges[agent_index]) count += e ? 1 : 0;
  return count;
}

std::size_t FeasibilityGraph::index_of(AgentId agent) const {
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (agents[a] == agent) return a;
  }
  throw PreconditionError("agent " + std::to_string(agent) + " is not in the graph");
}

FeasibilityGraph build_feasibility_graph(const Instance& instance, std::span<const AgentId> agents,
                                         std::vector<LabeledBundle> bundles) {
  Bundle seen;
  for (const auto& b : bundles) {
    instance.check_bundle(b.goods);
    if (!b.goods.disjoint_from(seen)) throw PreconditionError("graph bundles overlap");
    seen = seen | b.goods;
  }
  FeasibilityGraph graph;
  graph.agents.assign(agents.begin(), agents.end());
  graph.bundles = std::move(bundles);
  const std::size_t k = graph.bundles.size();
  for (AgentId agent : graph.agents) {
    instance.check_agent(agent);
    std::vector<Rational> row(k);
    Rational threshold;
    for (std::size_t b = 0; b < k; ++b) {
      const Bundle& goods = graph.bundles[b].goods;
      row[b] = vmax(instance, agent, goods);
      for (GoodId g : goods) threshold = max(threshold, vmax(instance, agent, goods.without(g)));
    }
    std::vector<bool> edge_row(k);
    for (std::size_t b = 0; b < k; ++b) edge_row[b] = row[b] >= threshold;
    graph.vmax.push_back(std::move(row));
    graph.threshold.push_back(threshold);
    graph.edges.push_back(std::move(edge_row));
  }
  return graph;
}

std::optional<PairMatching> select_perfect_matching(const FeasibilityGraph& graph,
                                                    AgentId priority_agent,
                                                    AgentId secondary_agent) {
  if (graph.agents.size() != 2 || priority_agent == secondary_agent) {
    throw PreconditionError("perfect matching selection needs two distinct agents");
  }
  const std::size_t p = graph.index_of(priority_agent);
  const std::size_t s = graph.index_of(secondary_agent);
  std::optional<PairMatching> best;
  for (std::size_t pb = 0; pb < graph.bundles.size(); ++pb) {
    if (!graph.has_edge(p, pb)) continue;
    for (std::size_t sb = 0; sb < graph.bundles.size(); ++sb) {
      if (sb == pb || !graph.has_edge(s, sb)) continue;
      // Strict improvement only, so earlier indices win ties.
      if (!best || graph.vmax[p][pb] > graph.vmax[p][best->priority_bundle] ||
          (graph.vmax[p][pb] == graph.vmax[p][best->priority_bundle] &&
           graph.vmax[s][sb] > graph.vmax[s][best->secondary_bundle])) {
        best = PairMatching{pb, sb};
      }
    }
  }
  return best;
}

const char* to_string(TwoAgentBranch branch) {
  switch (branch) {
    case TwoAgentBranch::kAlreadyEfx: return "already-efx";
    case TwoAgentBranch::kMutualSwap: return "mutual-swap";
    case TwoAgentBranch::kRemovalLoop: return "removal-loop";
    case TwoAgentBranch::kLeximinSplit: return "leximin-split";
  }
  return "unknown";
}

namespace {

GoodId least_valued(const Instance& instance, AgentId agent, const Bundle& bundle) {
  GoodId best = *bundle.begin();
  for (GoodId g : bundle) {
    if (instance.value(agent, g) < instance.value(agent, best)) best = g;
  }
  return best;
}

}  // namespace

TwoAgentResult efx_2a(const Instance& instance, std::pair<AgentId, AgentId> pair,
                      const Allocation& input) {
  const auto [a, b] = pair;
  instance.check_agent(a);
  instance.check_agent(b);
  if (a == b) throw PreconditionError("efx_2a needs two distinct agents");
  check_allocation(instance, input);
  const Bundle xa = input.bundle(a);
  const Bundle xb = input.bundle(b);
  if (!is_budget_feasible(instance, a, xa) || !is_budget_feasible(instance, b, xb)) {
    throw PreconditionError("efx_2a input is not budget-feasible for the pair");
  }

  TwoAgentResult result;
  TwoAgentTrace& trace = result.trace;
  trace.input_values = {bundle_value(instance, a, xa), bundle_value(instance, b, xb)};
  const bool a_envies = efx_envies(instance, trace.input_values[0], a, xb);
  const bool b_envies = efx_envies(instance, trace.input_values[1], b, xa);

  auto finish = [&](Bundle matched_a, Bundle matched_b, Bundle fa, Bundle fb) {
    std::vector<Bundle> bundles = input.bundles();
    bundles[a] = fa;
    bundles[b] = fb;
    result.allocation = Allocation(std::move(bundles), input.scope());
    result.matched = {matched_a, matched_b};
    result.leftout_rprime = (matched_a - fa) | (matched_b - fb);
    return result;
  };

  if (!a_envies && !b_envies) {
    trace.branch = TwoAgentBranch::kAlreadyEfx;
    return finish(xa, xb, xa, xb);
  }
  if (a_envies && b_envies) {
    trace.branch = TwoAgentBranch::kMutualSwap;
    return finish(xb, xa, s_max(instance, a, xb), s_max(instance, b, xa));
  }

  const AgentId e = a_envies ? a : b;
  const AgentId d = a_envies ? b : a;
  const Bundle xe = a_envies ? xa : xb;
  const Bundle xd = a_envies ? xb : xa;
  trace.relabeled = !a_envies;
  trace.envier = e;
  trace.envied = d;
  const std::array<AgentId, 2> graph_agents{e, d};

  std::vector<LabeledBundle> bundles;
  std::optional<PairMatching> matching;
  if (bundle_value(instance, e, xe) * Rational(2) >= vmax(instance, e, xd)) {
    trace.branch = TwoAgentBranch::kRemovalLoop;
    Bundle x2 = xd;
    Bundle r;
    while (true) {
      bundles = {{"X1", xe}, {"X2", x2}, {"R", r}};
      matching = select_perfect_matching(build_feasibility_graph(instance, graph_agents, bundles),
                                         d, e);
      if (matching) break;
      if (x2.empty()) {
        throw InvariantViolation("efx_2a removal loop emptied the envied bundle");
      }
      const GoodId g = least_valued(instance, e, x2);
      x2.erase(g);
      r.insert(g);
      trace.removed.push_back(g);
      ++trace.iterations;
    }
  } else {
    trace.branch = TwoAgentBranch::kLeximinSplit;
    const SplitPair split =
        leximin_pp_split(xd, [&](const Bundle& part) { return vmax(instance, e, part); });
    trace.split = split;
    bundles = {{"X1", xe}, {"X2'", split.first}, {"X2''", split.second}};
    matching = select_perfect_matching(build_feasibility_graph(instance, graph_agents, bundles),
                                       d, e);
    if (!matching) throw InvariantViolation("efx_2a found no perfect matching after the split");
  }

  const std::size_t unmatched = 3 - matching->priority_bundle - matching->secondary_bundle;
  result.unallocated_r = bundles[unmatched].goods;
  trace.graph_bundles = bundles;
  const Bundle matched_e = bundles[matching->secondary_bundle].goods;
  const Bundle matched_d = bundles[matching->priority_bundle].goods;
  const Bundle fe = s_max(instance, e, matched_e);
  const Bundle fd = s_max(instance, d, matched_d);
  if (a_envies) {
    trace.matched_index = {matching->secondary_bundle, matching->priority_bundle};
    return finish(matched_e, matched_d, fe, fd);
  }
  trace.matched_index = {matching->priority_bundle, matching->secondary_bundle};
  return finish(matched_d, matched_e, fd, fe);
}

}  // namespace budgeted_efx
