#include "budgeted_efx/oracles.hpp"

#include <sstream>
#include <string>
#include <vector>

#include "budgeted_efx/errors.hpp"

namespace budgeted_efx {

namespace {

class NodeCounter {
 public:
  explicit NodeCounter(SearchBudget budget) : cap_(budget.max_assignments) {
    if (cap_ == 0) throw PreconditionError("search budget must be positive");
  }
  void tick() {
    if (++count_ > cap_) {
      throw SearchBudgetExhausted("search budget exhausted after " + std::to_string(cap_) +
                                  " nodes");
    }
  }

 private:
  std::uint64_t cap_;
  std::uint64_t count_ = 0;
};

std::vector<AgentId> every_agent(const Instance& instance) {
  std::vector<AgentId> agents(instance.num_agents());
  for (AgentId i = 0; i < agents.size(); ++i) agents[i] = i;
  return agents;
}

void check_agents(const Instance& instance, std::span<const AgentId> agents) {
  if (agents.empty()) throw PreconditionError("agent list must be nonempty");
  for (std::size_t a = 0; a < agents.size(); ++a) {
    instance.check_agent(agents[a]);
    for (std::size_t b = 0; b < a; ++b) {
      if (agents[a] == agents[b]) throw PreconditionError("agent list has duplicates");
    }
  }
}

std::string dump_instance(const Instance& instance, const Bundle& pool) {
  std::ostringstream out;
  out << "costs=[";
  for (std::size_t g = 0; g < instance.num_goods(); ++g) out << (g ? "," : "") << instance.cost(g).str();
  out << "]";
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    out << " agent" << i << "(B=" << instance.budget(i).str() << ",v=[";
    for (std::size_t g = 0; g < instance.num_goods(); ++g) {
      out << (g ? "," : "") << instance.value(i, g).str();
    }
    out << "])";
  }
  out << " pool=" << pool.str();
  return out.str();
}

class NswSearch {
 public:
  NswSearch(const Instance& instance, std::span<const AgentId> agents, const Bundle& pool,
            SearchBudget budget)
      : agents_(agents.begin(), agents.end()),
        goods_(pool.goods()),
        counter_(budget),
        cost_used_(agents_.size()),
        value_sum_(agents_.size()),
        bundles_(agents_.size()) {
    const std::size_t k = agents_.size();
    const std::size_t m = goods_.size();
    for (GoodId g : goods_) costs_.push_back(instance.cost(g));
    budgets_.resize(k);
    values_.assign(k, std::vector<Rational>(m));
    suffix_.assign(k, std::vector<Rational>(m + 1));
    for (std::size_t a = 0; a < k; ++a) {
      budgets_[a] = instance.budget(agents_[a]);
      for (std::size_t idx = 0; idx < m; ++idx) values_[a][idx] = instance.value(agents_[a], goods_[idx]);
      for (std::size_t idx = m; idx-- > 0;) {
        suffix_[a][idx] = suffix_[a][idx + 1];
        if (costs_[idx] <= budgets_[a]) suffix_[a][idx] += values_[a][idx];
      }
    }
  }

  std::vector<Bundle> run() {
    visit(0);
    return best_bundles_;
  }

 private:
  void visit(std::size_t idx) {
    counter_.tick();
    const std::size_t k = agents_.size();
    if (idx == goods_.size()) {
      Rational product(1);
      for (std::size_t a = 0; a < k; ++a) product *= value_sum_[a];
      if (!have_best_ || product > best_product_) {
        best_product_ = product;
        best_bundles_ = bundles_;
        have_best_ = true;
      }
      return;
    }
    if (have_best_) {
      Rational bound(1);
      for (std::size_t a = 0; a < k; ++a) bound *= value_sum_[a] + suffix_[a][idx];
      if (bound <= best_product_) return;
    }
    for (std::size_t a = 0; a < k; ++a) {
      cost_used_[a] += costs_[idx];
      if (cost_used_[a] <= budgets_[a]) {
        value_sum_[a] += values_[a][idx];
        bundles_[a].insert(goods_[idx]);
        visit(idx + 1);
        bundles_[a].erase(goods_[idx]);
        value_sum_[a] -= values_[a][idx];
      }
      cost_used_[a] -= costs_[idx];
    }
    visit(idx + 1);
  }

  std::vector<AgentId> agents_;
  std::vector<GoodId> goods_;
  NodeCounter counter_;
  std::vector<Rational> costs_;
  std::vector<Rational> budgets_;
  std::vector<std::vector<Rational>> values_;
  std::vector<std::vector<Rational>> suffix_;
  std::vector<Rational> cost_used_;
  std::vector<Rational> value_sum_;
  std::vector<Bundle> bundles_;
  bool have_best_ = false;
  Rational best_product_;
  std::vector<Bundle> best_bundles_;
};

/// Visits every assignment of `goods` to the listed agents (plus
/// "unallocated") in lexicographic order, optionally skipping budget-infeasible
/// branches. `leaf` returns true to stop the enumeration.
template <class Leaf>
void enumerate_allocations(const Instance& instance, const std::vector<AgentId>& agents,
                           const std::vector<GoodId>& goods, bool budget_feasible_only,
                           NodeCounter& counter, Leaf&& leaf) {
  std::vector<Bundle> bundles(instance.num_agents());
  std::vector<Rational> cost_used(instance.num_agents());
  bool stop = false;
  auto visit = [&](auto&& self, std::size_t idx) -> void {
    counter.tick();
    if (idx == goods.size()) {
      stop = leaf(bundles);
      return;
    }
    const GoodId g = goods[idx];
    for (std::size_t a = 0; a < agents.size() && !stop; ++a) {
      const AgentId i = agents[a];
      cost_used[i] += instance.cost(g);
      if (!budget_feasible_only || cost_used[i] <= instance.budget(i)) {
        bundles[i].insert(g);
        self(self, idx + 1);
        bundles[i].erase(g);
      }
      cost_used[i] -= instance.cost(g);
    }
    if (!stop) self(self, idx + 1);
  };
  visit(visit, 0);
}

bool passes(const Instance& instance, const Allocation& allocation, FairnessPredicate predicate) {
  switch (predicate) {
    case FairnessPredicate::kAny: return true;
    case FairnessPredicate::kEnvyFree: return is_envy_free(instance, allocation);
    case FairnessPredicate::kEf1: return is_ef1(instance, allocation);
    case FairnessPredicate::kEfx: return is_efx(instance, allocation);
  }
  return false;
}

}  // namespace

Allocation max_nsw_allocation(const Instance& instance, std::span<const AgentId> agents,
                              const Bundle& pool, SearchBudget budget) {
  check_agents(instance, agents);
  instance.check_bundle(pool);
  const std::vector<Bundle> found = NswSearch(instance, agents, pool, budget).run();
  std::vector<Bundle> bundles(instance.num_agents());
  for (std::size_t a = 0; a < agents.size(); ++a) bundles[agents[a]] = found[a];
  return Allocation(std::move(bundles), pool);
}

Allocation max_nsw_allocation_exhaustive(const Instance& instance,
                                         std::span<const AgentId> agents, const Bundle& pool,
                                         SearchBudget budget) {
  check_agents(instance, agents);
  instance.check_bundle(pool);
  NodeCounter counter(budget);
  const std::vector<AgentId> listed(agents.begin(), agents.end());
  bool have = false;
  Rational best_product;
  std::vector<Bundle> best;
  enumerate_allocations(instance, listed, pool.goods(), true, counter,
                        [&](const std::vector<Bundle>& bundles) {
                          Rational product(1);
                          for (AgentId i : listed) product *= bundle_value(instance, i, bundles[i]);
                          if (!have || product > best_product) {
                            best_product = product;
                            best = bundles;
                            have = true;
                          }
                          return false;
                        });
  return Allocation(std::move(best), pool);
}

Allocation complete_efx_allocation(const Instance& instance, std::span<const AgentId> agents,
                                   const Bundle& pool, SearchBudget budget) {
  check_agents(instance, agents);
  instance.check_bundle(pool);
  const Rational pool_cost = bundle_cost(instance, pool);
  for (AgentId i : agents) {
    if (pool_cost > instance.budget(i)) {
      throw PreconditionError("complete EFx search needs c(pool) within every budget");
    }
  }
  const std::vector<GoodId> goods = pool.goods();
  const std::size_t k = agents.size();
  const std::size_t m = goods.size();
  std::vector<std::vector<Rational>> values(k, std::vector<Rational>(m));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t idx = 0; idx < m; ++idx) values[a][idx] = instance.value(agents[a], goods[idx]);
  }

  NodeCounter counter(budget);
  std::vector<std::size_t> owner(m, 0);
  // worth[a][b]: agent a's value for b's bundle; cheapest[a][b]: a's value
  // for the least valuable good in b's bundle.
  std::vector<std::vector<Rational>> worth(k, std::vector<Rational>(k));
  std::vector<std::vector<Rational>> cheapest(k, std::vector<Rational>(k));
  std::vector<std::vector<bool>> nonempty(k, std::vector<bool>(k));
  while (true) {
    counter.tick();
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        worth[a][b] = Rational();
        nonempty[a][b] = false;
      }
    }
    for (std::size_t idx = 0; idx < m; ++idx) {
      const std::size_t b = owner[idx];
      for (std::size_t a = 0; a < k; ++a) {
        worth[a][b] += values[a][idx];
        if (!nonempty[a][b] || values[a][idx] < cheapest[a][b]) cheapest[a][b] = values[a][idx];
        nonempty[a][b] = true;
      }
    }
    bool efx = true;
    for (std::size_t a = 0; a < k && efx; ++a) {
      for (std::size_t b = 0; b < k && efx; ++b) {
        if (a != b && nonempty[a][b] && worth[a][b] - cheapest[a][b] > worth[a][a]) efx = false;
      }
    }
    if (efx) {
      std::vector<Bundle> bundles(instance.num_agents());
      for (std::size_t idx = 0; idx < m; ++idx) bundles[agents[owner[idx]]].insert(goods[idx]);
      return Allocation(std::move(bundles), pool);
    }
    // Odometer step; the last good is the least significant digit.
    bool advanced = false;
    for (std::size_t idx = m; idx-- > 0;) {
      if (++owner[idx] < k) {
        advanced = true;
        break;
      }
      owner[idx] = 0;
    }
    if (!advanced) break;
  }
  throw ExistenceViolation("no complete EFx allocation found: " + dump_instance(instance, pool));
}

SplitPair leximin_pp_split(const Bundle& pool, const SetValuation& u) {
  const std::vector<GoodId> goods = pool.goods();
  const std::size_t k = goods.size();
  if (k > 20) throw PreconditionError("leximin++ split is limited to 20 goods");
  const std::uint64_t full = (std::uint64_t{1} << k) - 1;
  auto to_bundle = [&](std::uint64_t local) {
    Bundle b;
    for (std::size_t idx = 0; idx < k; ++idx) {
      if ((local >> idx) & 1U) b.insert(goods[idx]);
    }
    return b;
  };
  std::vector<Bundle> parts(full + 1);
  std::vector<Rational> worth(full + 1);
  for (std::uint64_t local = 0; local <= full; ++local) {
    parts[local] = to_bundle(local);
    worth[local] = u(parts[local]);
  }
  // Is part x's (u, size) key larger than y's?
  auto key_greater = [&](std::uint64_t x, std::uint64_t y) {
    if (worth[x] != worth[y]) return worth[x] > worth[y];
    return parts[x].size() > parts[y].size();
  };

  bool have = false;
  SplitPair best;
  std::uint64_t best_worse = 0;
  std::uint64_t best_better = 0;
  for (std::uint64_t a = 0; a <= full; ++a) {
    const std::uint64_t b = full ^ a;
    std::uint64_t better = a;
    std::uint64_t worse = b;
    if (key_greater(b, a) || (!key_greater(a, b) && lex_less(parts[b], parts[a]))) {
      better = b;
      worse = a;
    }
    bool take = !have;
    if (have) {
      if (worth[worse] != worth[best_worse]) {
        take = worth[worse] > worth[best_worse];
      } else if (parts[worse].size() != parts[best_worse].size()) {
        take = parts[worse].size() > parts[best_worse].size();
      } else if (worth[better] != worth[best_better]) {
        take = worth[better] > worth[best_better];
      } else if (parts[better].size() != parts[best_better].size()) {
        take = parts[better].size() > parts[best_better].size();
      } else {
        take = lex_less(parts[better], best.first);
      }
    }
    if (take) {
      have = true;
      best = {parts[better], parts[worse]};
      best_worse = worse;
      best_better = better;
    }
  }
  return best;
}

PredicateOptimum best_allocation_under_predicate(const Instance& instance,
                                                 FairnessPredicate predicate,
                                                 SearchBudget budget) {
  NodeCounter counter(budget);
  const std::vector<GoodId> goods = instance.all_goods().goods();
  bool have = false;
  PredicateOptimum best{Allocation::empty(instance), Rational()};
  enumerate_allocations(instance, every_agent(instance), goods, true, counter, [&](const std::vector<Bundle>& bundles) {
    Rational product(1);
    for (AgentId i = 0; i < bundles.size(); ++i) product *= bundle_value(instance, i, bundles[i]);
    if (have && product <= best.product) return false;
    Allocation candidate(instance, bundles);
    if (passes(instance, candidate, predicate)) {
      best = {std::move(candidate), product};
      have = true;
    }
    return false;
  });
  return best;
}

bool is_pareto_efficient(const Instance& instance, const Allocation& allocation, ParetoScope scope,
                         SearchBudget budget) {
  check_allocation(instance, allocation);
  if (scope == ParetoScope::kBudgetFeasible && !is_budget_feasible(instance, allocation)) {
    throw PreconditionError("Pareto check expects a budget-feasible allocation");
  }
  NodeCounter counter(budget);
  const std::size_t n = instance.num_agents();
  std::vector<Rational> current(n);
  for (AgentId i = 0; i < n; ++i) current[i] = bundle_value(instance, i, allocation.bundle(i));
  bool dominated = false;
  enumerate_allocations(instance, every_agent(instance), allocation.scope().goods(),
                        scope == ParetoScope::kBudgetFeasible, counter,
                        [&](const std::vector<Bundle>& bundles) {
                          bool strict = false;
                          for (AgentId i = 0; i < n; ++i) {
                            const Rational v = bundle_value(instance, i, bundles[i]);
                            if (v < current[i]) return false;
                            if (v > current[i]) strict = true;
                          }
                          dominated = strict;
                          return dominated;
                        });
  return !dominated;
}

}  // namespace budgeted_efx
