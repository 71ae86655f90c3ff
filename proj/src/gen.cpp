#include "budgeted_efx/gen.hpp"

#include <algorithm>
#include <random>

#include "budgeted_efx/errors.hpp"
#include "budgeted_efx/oracles.hpp"

namespace budgeted_efx {

namespace {

void check_params(const GenParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw PreconditionError(what);
  };
  require(p.n >= 1, "n must be positive");
  require(p.m_min <= p.m_max && p.m_max <= kMaxGoods, "bad good-count range");
  require(0 <= p.cost_min && p.cost_min <= p.cost_max, "bad cost range");
  require(0 <= p.value_min && p.value_min <= p.value_max, "bad value range");
  require(p.budget_spread >= 1, "budget spread must be at least 1");
  require(p.zero_probability >= 0.0 && p.zero_probability <= 1.0, "bad zero probability");
  require(p.base_budget_min <= p.base_budget_max, "bad base budget range");
}

}  // namespace

std::vector<Instance> gen_instances(const GenParams& params) {
  check_params(params);
  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::size_t> good_count(params.m_min, params.m_max);
  std::uniform_int_distribution<std::int64_t> cost(params.cost_min, params.cost_max);
  std::uniform_int_distribution<std::int64_t> value(params.value_min, params.value_max);
  std::bernoulli_distribution zero(params.zero_probability);
  const std::int64_t base_lo = params.base_budget_max == 0 ? params.cost_max : params.base_budget_min;
  const std::int64_t base_hi = params.base_budget_max == 0 ? params.cost_max : params.base_budget_max;
  std::uniform_int_distribution<std::int64_t> base_budget(base_lo, base_hi);

  std::vector<Instance> out;
  out.reserve(params.count);
  std::vector<AgentId> agents(params.n);
  for (AgentId i = 0; i < params.n; ++i) agents[i] = i;
  while (out.size() < params.count) {
    bool done = false;
    for (std::size_t attempt = 0; attempt < params.max_retries && !done; ++attempt) {
      const std::size_t m = good_count(rng);
      std::vector<Rational> costs;
      for (std::size_t g = 0; g < m; ++g) costs.emplace_back(cost(rng));
      const std::int64_t base = base_budget(rng);
      const std::int64_t top = base * params.budget_spread;
      std::uniform_int_distribution<std::int64_t> middle(base, top);
      std::vector<Rational> budgets;
      for (std::size_t i = 0; i < params.n; ++i) {
        budgets.emplace_back(i == 0 ? base : i + 1 == params.n ? top : middle(rng));
      }
      std::shuffle(budgets.begin(), budgets.end(), rng);
      std::vector<AgentSpec> specs;
      for (std::size_t i = 0; i < params.n; ++i) {
        AgentSpec spec{budgets[i], {}};
        for (std::size_t g = 0; g < m; ++g) {
          const std::int64_t v = value(rng);
          spec.values.emplace_back(zero(rng) ? 0 : v);
        }
        specs.push_back(std::move(spec));
      }
      Instance candidate(std::move(costs), std::move(specs));
      const Allocation opt = max_nsw_allocation(candidate, agents, candidate.all_goods());
      if (nsw_product(candidate, opt).is_positive()) {
        out.push_back(std::move(candidate));
        done = true;
      }
    }
    if (!done) {
      throw GenerationError("no instance with a positive optimum after " +
                            std::to_string(params.max_retries) + " attempts");
    }
  }
  return out;
}

}  // namespace budgeted_efx
