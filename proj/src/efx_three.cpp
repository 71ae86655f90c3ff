#include "budgeted_efx/efx_three.hpp"

#include <algorithm>
#include <string>

#include "budgeted_efx/errors.hpp"

namespace budgeted_efx {

Rational max_guaranteed_alpha() { return Rational(1, 35); }

Bundle SetAside::all() const {
  Bundle b;
  for (const auto& g : goods) {
    if (g) b.insert(*g);
  }
  return b;
}

const char* to_string(ThreeAgentBranch branch) {
  switch (branch) {
    case ThreeAgentBranch::kSmallInstance: return "small-instance";
    case ThreeAgentBranch::kEqualBudget: return "equal-budget";
    case ThreeAgentBranch::kElse: return "else";
  }
  return "unknown";
}

const char* to_string(ElseReturn point) {
  switch (point) {
    case ElseReturn::kReturn1: return "else-return1";
    case ElseReturn::kReturn2: return "else-return2";
    case ElseReturn::kReturn3: return "else-return3";
  }
  return "unknown";
}

namespace {

/// Goods sorted by the agent's value, most valued first, ties by lowest id.
std::vector<GoodId> by_value_desc(const Instance& instance, AgentId agent,
                                  std::vector<GoodId> goods) {
  std::stable_sort(goods.begin(), goods.end(), [&](GoodId x, GoodId y) {
    return instance.value(agent, x) > instance.value(agent, y);
  });
  return goods;
}

class MatchingSearch {
 public:
  MatchingSearch(const Instance& instance, std::vector<std::vector<GoodId>> options,
                 std::vector<std::optional<Rational>> floors)
      : instance_(instance),
        options_(std::move(options)),
        floors_(std::move(floors)),
        current_(options_.size()) {}

  std::optional<std::vector<std::optional<GoodId>>> run() {
    visit(0, Bundle(), Rational());
    return best_;
  }

 private:
  void visit(std::size_t agent, Bundle used, const Rational& weight) {
    if (agent == options_.size()) {
      if (!best_ || weight > best_weight_) {
        best_ = current_;
        best_weight_ = weight;
      }
      return;
    }
    for (GoodId g : options_[agent]) {
      if (used.contains(g)) continue;
      const Rational& v = instance_.value(agent, g);
      if (floors_[agent] && v < *floors_[agent]) continue;
      current_[agent] = g;
      visit(agent + 1, used.with(g), weight + v);
    }
    if (!floors_[agent]) {
      current_[agent] = std::nullopt;
      visit(agent + 1, used, weight);
    }
  }

  const Instance& instance_;
  std::vector<std::vector<GoodId>> options_;
  std::vector<std::optional<Rational>> floors_;
  std::vector<std::optional<GoodId>> current_;
  std::optional<std::vector<std::optional<GoodId>>> best_;
  Rational best_weight_;
};

bool all_budgets_equal(const Instance& instance) {
  for (AgentId i = 1; i < instance.num_agents(); ++i) {
    if (instance.budget(i) != instance.budget(0)) return false;
  }
  return true;
}

/// True when density v_x/c_x is below v_y/c_y; both costs positive.
bool lower_density(const Instance& instance, AgentId agent, GoodId x, GoodId y) {
  return instance.value(agent, x) * instance.cost(y) < instance.value(agent, y) * instance.cost(x);
}

}  // namespace

PreprocessResult preprocess(const Instance& instance, const Allocation& opt) {
  check_allocation(instance, opt);
  const std::size_t n = instance.num_agents();
  PreprocessResult result;
  std::vector<std::vector<GoodId>> options(n);
  std::vector<std::optional<Rational>> floors(n);
  for (AgentId i = 0; i < n; ++i) {
    std::vector<GoodId> affordable;
    for (GoodId g = 0; g < instance.num_goods(); ++g) {
      if (instance.cost(g) <= instance.budget(i)) affordable.push_back(g);
    }
    affordable = by_value_desc(instance, i, std::move(affordable));
    if (affordable.size() > 3) affordable.resize(3);
    const Bundle favorites(affordable);
    result.favorites.push_back(favorites);
    options[i] = favorites.goods();
    for (GoodId g : favorites & opt.bundle(i)) {
      if (!floors[i] || instance.value(i, g) > *floors[i]) floors[i] = instance.value(i, g);
    }
  }
  const auto matching = MatchingSearch(instance, options, floors).run();
  if (!matching) throw InvariantViolation("preprocess infeasible: no matching meets the constraints");
  result.setaside.goods = *matching;
  for (AgentId i = 0; i < n; ++i) {
    const auto& g = result.setaside.goods[i];
    result.setaside.values.push_back(g ? instance.value(i, *g) : Rational());
  }
  result.pool = instance.all_goods() - result.setaside.all();
  return result;
}

EqualBudgetResult equal_budget_procedure(const Instance& instance, const Allocation& opt_on_pool,
                                         SearchBudget budget) {
  check_allocation(instance, opt_on_pool);
  if (!all_budgets_equal(instance)) throw PreconditionError("equal-budget procedure needs equal budgets");
  const std::size_t n = instance.num_agents();
  const Rational limit = instance.budget(0) / Rational(static_cast<std::int64_t>(n));

  EqualBudgetResult result;
  EqualBudgetTrace& trace = result.trace;
  trace.opt_on_pool = opt_on_pool;
  for (AgentId i = 0; i < n; ++i) {
    Bundle x = opt_on_pool.bundle(i);
    while (bundle_cost(instance, x) > limit) {
      std::optional<GoodId> drop;
      for (GoodId g : x) {
        if (instance.cost(g).is_zero()) continue;
        if (!drop || lower_density(instance, i, g, *drop)) drop = g;
      }
      if (!drop) throw InvariantViolation("trimming found no positive-cost good");
      x.erase(*drop);
    }
    trace.trimmed.push_back(x);
    trace.z = trace.z | x;
  }

  std::vector<AgentId> agents(n);
  for (AgentId i = 0; i < n; ++i) agents[i] = i;
  trace.complete_efx = complete_efx_allocation(instance, agents, trace.z, budget);
  std::vector<Bundle> bundles = trace.complete_efx.bundles();

  // Every part of Z is affordable, so envy is plain additive comparison.
  auto envy = [&](AgentId i, AgentId j) {
    return bundle_value(instance, i, bundles[j]) > bundle_value(instance, i, bundles[i]);
  };
  // Each exchange strictly raises every participant's value, so the loop
  // ends; the cap only guards against a broken invariant.
  for (int round = 0;; ++round) {
    if (round > 1000) throw InvariantViolation("envy-cycle removal did not settle");
    bool changed = false;
    for (AgentId i = 0; i < n && !changed; ++i) {
      for (AgentId j = 0; j < n && !changed; ++j) {
        for (AgentId k = 0; k < n && !changed; ++k) {
          if (i == j || j == k || i == k) continue;
          if (envy(i, j) && envy(j, k) && envy(k, i)) {
            const Bundle xi = bundles[i];
            bundles[i] = bundles[j];
            bundles[j] = bundles[k];
            bundles[k] = xi;
            ++trace.rotations;
            changed = true;
          }
        }
      }
    }
    for (AgentId i = 0; i < n && !changed; ++i) {
      for (AgentId j = i + 1; j < n && !changed; ++j) {
        if (envy(i, j) && envy(j, i)) {
          std::swap(bundles[i], bundles[j]);
          ++trace.swaps;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  result.allocation = Allocation(std::move(bundles), opt_on_pool.scope());
  return result;
}

SplitPair round_robin_self_split(const Instance& instance, AgentId agent, const Bundle& pool) {
  instance.check_agent(agent);
  instance.check_bundle(pool);
  SplitPair split;
  bool to_first = true;
  for (GoodId g : by_value_desc(instance, agent, pool.goods())) {
    (to_first ? split.first : split.second).insert(g);
    to_first = !to_first;
  }
  return split;
}

ElseResult else_procedure(const Instance& instance, std::array<AgentId, 3> roles,
                          const Bundle& pool, const AlphaParams& alpha, SearchBudget budget) {
  if (instance.num_agents() != 3) throw PreconditionError("else procedure needs three agents");
  instance.check_bundle(pool);
  for (AgentId a : roles) instance.check_agent(a);
  ElseResult result;
  ElseTrace& trace = result.trace;
  auto [a1, a2, a3] = roles;
  const Rational& b1 = instance.budget(a1);

  trace.x1 = knapsack_vmax(instance, a1, pool, b1).witness;
  const std::array<AgentId, 2> others{a2, a3};
  trace.bar = max_nsw_allocation(instance, others, pool - trace.x1, budget);
  std::vector<Bundle> bundles(3);
  bundles[a1] = trace.x1;
  bundles[a2] = trace.bar.bundle(a2);
  bundles[a3] = trace.bar.bundle(a3);
  trace.pair23 = efx_2a(instance, {a2, a3}, Allocation(bundles, pool));

  Rational m2 = knapsack_vmax(instance, a2, pool, b1).value;
  Rational m3 = knapsack_vmax(instance, a3, pool, b1).value;
  if (m2 < alpha.alpha && m3 < alpha.alpha) {
    trace.point = ElseReturn::kReturn1;
    trace.roles = {a1, a2, a3};
    trace.m2 = m2;
    trace.m3 = m3;
    result.allocation = trace.pair23.allocation;
    return result;
  }
  if (m3 >= alpha.alpha) {
    std::swap(a2, a3);
    std::swap(m2, m3);
    trace.roles_swapped = true;
  }
  trace.roles = {a1, a2, a3};
  trace.m2 = m2;
  trace.m3 = m3;

  const Allocation& after23 = trace.pair23.allocation;
  const Bundle x2 = after23.bundle(a2);
  const Bundle x3 = after23.bundle(a3);
  if (bundle_value(instance, a2, x2) >= bundle_value(instance, a2, trace.x1)) {
    trace.point = ElseReturn::kReturn2;
    result.allocation = after23;
    return result;
  }

  trace.point = ElseReturn::kReturn3;
  bundles[a1] = Bundle();
  bundles[a2] = trace.x1;
  bundles[a3] = x3;
  trace.pair12 = efx_2a(instance, {a1, a2}, Allocation(bundles, pool));
  const Bundle x1_prime = trace.pair12->allocation.bundle(a1);
  const Bundle x2_prime = trace.pair12->allocation.bundle(a2);

  trace.round_robin = round_robin_self_split(instance, a3, x3);
  const SplitPair& rr = *trace.round_robin;
  trace.dropped_part =
      bundle_value(instance, a2, rr.first) >= bundle_value(instance, a2, rr.second) ? rr.first
                                                                                     : rr.second;
  Bundle x3_star = x3 - trace.dropped_part;
  trace.x1_alt = s_max(instance, a1, x3_star);
  Bundle x1_star = x1_prime;
  if (bundle_value(instance, a1, x1_prime) < bundle_value(instance, a1, trace.x1_alt)) {
    trace.upgraded = true;
    x1_star = trace.x1_alt;
    x3_star = x3_star - trace.x1_alt;
  }
  bundles[a1] = x1_star;
  bundles[a2] = x2_prime;
  bundles[a3] = x3_star;
  result.allocation = Allocation(std::move(bundles), pool);
  return result;
}

ThreeAgentResult efx_3a(const Instance& instance, const AlphaParams& alpha, SearchBudget budget) {
  if (instance.num_agents() != 3) throw PreconditionError("efx_3a needs exactly three agents");
  if (!alpha.alpha.is_positive() || alpha.alpha >= Rational(1)) {
    throw PreconditionError("alpha must lie strictly between 0 and 1");
  }
  if (alpha.guarantee_mode && alpha.alpha > max_guaranteed_alpha()) {
    throw PreconditionError("alpha above 1/35 voids the guarantees; disable guarantee mode to try it");
  }

  ThreeAgentResult result;
  const std::array<AgentId, 3> everyone{0, 1, 2};
  result.opt = max_nsw_allocation(instance, everyone, instance.all_goods(), budget);
  result.opt_product = nsw_product(instance, result.opt);
  result.by_budget = everyone;
  std::stable_sort(result.by_budget.begin(), result.by_budget.end(),
                   [&](AgentId x, AgentId y) { return instance.budget(x) < instance.budget(y); });
  if (instance.num_goods() <= 3) {
    if (result.opt_product.is_zero()) {
      throw DegenerateOptimumError("degenerate optimum: some agent has zero value in every optimum");
    }
    result.branch = ThreeAgentBranch::kSmallInstance;
    result.allocation = result.opt;
    result.before_setaside = result.opt;
    result.took_setaside.assign(3, false);
    return result;
  }

  result.normalized = normalize(instance, result.opt);
  const Instance& norm = *result.normalized;
  const auto [a1, a2, a3] = result.by_budget;
  result.preprocess = preprocess(norm, result.opt);
  const Bundle& pool = result.preprocess->pool;
  const Rational& b1 = norm.budget(a1);
  result.m2 = knapsack_vmax(norm, a2, pool, b1).value;
  result.m3 = knapsack_vmax(norm, a3, pool, b1).value;

  if (result.m2 >= alpha.alpha && result.m3 >= alpha.alpha) {
    result.branch = ThreeAgentBranch::kEqualBudget;
    const Instance reduced = norm.with_budget(a2, b1).with_budget(a3, b1);
    const Allocation opt_on_pool = max_nsw_allocation(reduced, everyone, pool, budget);
    result.equal_budget = equal_budget_procedure(reduced, opt_on_pool, budget);
    result.before_setaside = result.equal_budget->allocation;
  } else {
    result.branch = ThreeAgentBranch::kElse;
    result.else_case = else_procedure(norm, result.by_budget, pool, alpha, budget);
    result.before_setaside = result.else_case->allocation;
  }

  std::vector<Bundle> bundles = result.before_setaside.bundles();
  result.took_setaside.assign(3, false);
  for (AgentId i : everyone) {
    const auto& s = result.preprocess->setaside.goods[i];
    if (s && result.preprocess->setaside.values[i] > bundle_value(norm, i, bundles[i])) {
      bundles[i] = Bundle{*s};
      result.took_setaside[i] = true;
    }
  }
  result.allocation = Allocation(std::move(bundles), instance.all_goods());
  return result;
}

}  // namespace budgeted_efx
