#include "support.hpp"

#include <stdexcept>

namespace testing_support {

std::filesystem::path data_dir() { return std::filesystem::path(TEST_DATA_DIR); }

Rational r(std::int64_t num, std::int64_t den) { return Rational(num, den); }

Instance t1() {
  return Instance({r(1, 2), r(1, 2), r(1)},
                  {{r(1), {r(1, 2), r(1, 2), r(0)}}, {r(1), {r(11, 10), r(11, 10), r(1)}}});
}

std::vector<Bundle> subsets(const Bundle& pool) {
  const std::vector<GoodId> goods = pool.goods();
  if (goods.size() > 24) throw std::invalid_argument("pool too large to enumerate");
  std::vector<Bundle> out;
  for (std::uint64_t local = 0; local < (std::uint64_t{1} << goods.size()); ++local) {
    Bundle b;
    for (std::size_t k = 0; k < goods.size(); ++k) {
      if ((local >> k) & 1U) b.insert(goods[k]);
    }
    out.push_back(b);
  }
  return out;
}

namespace {

Rational cost_of(const Instance& inst, const Bundle& b) {
  Rational c;
  for (GoodId g : b) c += inst.cost(g);
  return c;
}

Rational value_of(const Instance& inst, AgentId i, const Bundle& b) {
  Rational v;
  for (GoodId g : b) v += inst.value(i, g);
  return v;
}

}  // namespace

BruteKnapsack brute_knapsack(const Instance& inst, AgentId agent, const Bundle& pool,
                             const Rational& budget) {
  std::optional<BruteKnapsack> best;
  for (const Bundle& s : subsets(pool)) {
    if (cost_of(inst, s) > budget) continue;
    const Rational v = value_of(inst, agent, s);
    if (!best || v > best->value || (v == best->value && budgeted_efx::lex_less(s, best->witness))) {
      best = BruteKnapsack{v, s};
    }
  }
  return *best;
}

bool brute_efx_envies(const Instance& inst, const Rational& own, AgentId i, const Bundle& target) {
  for (const Bundle& s : subsets(target)) {
    if (cost_of(inst, s) > inst.budget(i)) continue;
    for (GoodId g : s) {
      if (value_of(inst, i, s.without(g)) > own) return true;
    }
  }
  return false;
}

bool brute_is_efx(const Instance& inst, const Allocation& alloc) {
  for (AgentId i = 0; i < inst.num_agents(); ++i) {
    const Rational own = value_of(inst, i, alloc.bundle(i));
    for (AgentId j = 0; j < inst.num_agents(); ++j) {
      if (i != j && brute_efx_envies(inst, own, i, alloc.bundle(j))) return false;
    }
  }
  return true;
}

bool brute_is_ef1(const Instance& inst, const Allocation& alloc) {
  for (AgentId i = 0; i < inst.num_agents(); ++i) {
    const Rational own = value_of(inst, i, alloc.bundle(i));
    for (AgentId j = 0; j < inst.num_agents(); ++j) {
      if (i == j) continue;
      for (const Bundle& s : subsets(alloc.bundle(j))) {
        if (s.empty() || cost_of(inst, s) > inst.budget(i)) continue;
        bool every_removal_still_envied = true;
        for (GoodId g : s) {
          if (value_of(inst, i, s.without(g)) <= own) every_removal_still_envied = false;
        }
        if (every_removal_still_envied) return false;
      }
    }
  }
  return true;
}

Allocation brute_max_nsw(const Instance& inst, const std::vector<AgentId>& agents,
                         const Bundle& pool) {
  const std::vector<GoodId> goods = pool.goods();
  const std::size_t k = agents.size() + 1;  // last option: nobody
  std::vector<std::size_t> digit(goods.size(), 0);
  std::optional<Allocation> best;
  Rational best_product;
  while (true) {
    std::vector<Bundle> bundles(inst.num_agents());
    for (std::size_t idx = 0; idx < goods.size(); ++idx) {
      if (digit[idx] < agents.size()) bundles[agents[digit[idx]]].insert(goods[idx]);
    }
    bool feasible = true;
    Rational product(1);
    for (AgentId a : agents) {
      feasible = feasible && cost_of(inst, bundles[a]) <= inst.budget(a);
      product *= value_of(inst, a, bundles[a]);
    }
    if (feasible && (!best || product > best_product)) {
      best = Allocation(bundles, pool);
      best_product = product;
    }
    std::size_t idx = goods.size();
    while (idx > 0 && ++digit[idx - 1] == k) {
      digit[idx - 1] = 0;
      --idx;
    }
    if (idx == 0) break;
  }
  return *best;
}

std::vector<Allocation> all_feasible_allocations(const Instance& inst) {
  const std::size_t m = inst.num_goods();
  const std::size_t k = inst.num_agents() + 1;
  std::vector<std::size_t> digit(m, 0);
  std::vector<Allocation> out;
  while (true) {
    std::vector<Bundle> bundles(inst.num_agents());
    for (std::size_t g = 0; g < m; ++g) {
      if (digit[g] < inst.num_agents()) bundles[digit[g]].insert(g);
    }
    bool feasible = true;
    for (AgentId i = 0; i < inst.num_agents(); ++i) {
      feasible = feasible && cost_of(inst, bundles[i]) <= inst.budget(i);
    }
    if (feasible) out.emplace_back(inst, bundles);
    std::size_t idx = m;
    while (idx > 0 && ++digit[idx - 1] == k) {
      digit[idx - 1] = 0;
      --idx;
    }
    if (idx == 0) break;
  }
  return out;
}

Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec) {
  std::uniform_int_distribution<std::size_t> m_dist(spec.m_min, spec.m_max);
  std::uniform_int_distribution<std::int64_t> cost(1, spec.cost_max);
  std::uniform_int_distribution<std::int64_t> value(1, spec.value_max);
  std::uniform_int_distribution<std::int64_t> budget(spec.budget_min, spec.budget_max);
  std::uniform_int_distribution<std::int64_t> den(1, 4);
  std::bernoulli_distribution zero(spec.zero_probability);
  std::bernoulli_distribution zero_cost(spec.zero_cost_probability);
  auto draw = [&](std::uniform_int_distribution<std::int64_t>& d) {
    return spec.fractional ? Rational(d(rng), den(rng)) : Rational(d(rng));
  };
  const std::size_t m = m_dist(rng);
  std::vector<Rational> costs;
  for (std::size_t g = 0; g < m; ++g) costs.push_back(zero_cost(rng) ? Rational() : draw(cost));
  std::vector<budgeted_efx::AgentSpec> agents;
  for (std::size_t i = 0; i < spec.n; ++i) {
    budgeted_efx::AgentSpec a{draw(budget), {}};
    for (std::size_t g = 0; g < m; ++g) a.values.push_back(zero(rng) ? Rational() : draw(value));
    agents.push_back(std::move(a));
  }
  return Instance(std::move(costs), std::move(agents));
}

Allocation random_feasible_allocation(std::mt19937_64& rng, const Instance& inst) {
  std::vector<Bundle> bundles(inst.num_agents());
  std::vector<Rational> spent(inst.num_agents());
  std::uniform_int_distribution<std::size_t> pick(0, inst.num_agents());
  for (GoodId g = 0; g < inst.num_goods(); ++g) {
    const std::size_t a = pick(rng);
    if (a == inst.num_agents()) continue;
    if (spent[a] + inst.cost(g) > inst.budget(a)) continue;
    spent[a] += inst.cost(g);
    bundles[a].insert(g);
  }
  return Allocation(inst, bundles);
}

}  // namespace testing_support
