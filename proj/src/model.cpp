#include "budgeted_efx/model.hpp"

#include <algorithm>
#include <sstream>

#include "budgeted_efx/errors.hpp"

namespace budgeted_efx {

// ---------------------------------------------------------------------------
// Bundle

Bundle::Bundle(std::initializer_list<GoodId> goods) {
  for (GoodId g : goods) insert(g);
}

Bundle::Bundle(std::span<const GoodId> goods) {
  for (GoodId g : goods) insert(g);
}

Bundle Bundle::first_n(std::size_t count) {
  if (count > kMaxGoods) throw StructuralError("bundle larger than kMaxGoods");
  if (count == kMaxGoods) return from_mask(~std::uint64_t{0});
  return from_mask((std::uint64_t{1} << count) - 1);
}

void Bundle::insert(GoodId g) {
  if (g >= kMaxGoods) throw StructuralError("good id " + std::to_string(g) + " out of range");
  mask_ |= std::uint64_t{1} << g;
}

std::vector<GoodId> Bundle::goods() const { return {begin(), end()}; }

std::string Bundle::str() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (GoodId g : *this) {
    if (!first) out << ',';
    out << g;
    first = false;
  }
  out << '}';
  return out.str();
}

bool lex_less(const Bundle& a, const Bundle& b) {
  const std::uint64_t diff = a.mask() ^ b.mask();
  if (diff == 0) return false;
  const std::uint64_t bit = diff & (~diff + 1);
  const std::uint64_t above = ~((bit << 1) - 1);
  if ((a.mask() & bit) != 0) {
    // a continues with the smaller good unless b has already ended.
    return (b.mask() & above) != 0;
  }
  return (a.mask() & above) == 0;
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::vector<Rational> costs, std::vector<AgentSpec> agents)
    : costs_(std::move(costs)), agents_(std::move(agents)) {
  if (costs_.size() > kMaxGoods) {
    throw StructuralError("at most " + std::to_string(kMaxGoods) + " goods are supported");
  }
  for (std::size_t g = 0; g < costs_.size(); ++g) {
    if (costs_[g].is_negative()) throw StructuralError("good " + std::to_string(g) + " has negative cost");
  }
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto& agent = agents_[i];
    if (agent.budget.is_negative()) {
      throw StructuralError("agent " + std::to_string(i) + " has negative budget");
    }
    if (agent.values.size() != costs_.size()) {
      throw StructuralError("agent " + std::to_string(i) + " has " +
                            std::to_string(agent.values.size()) + " values for " +
                            std::to_string(costs_.size()) + " goods");
    }
    for (std::size_t g = 0; g < agent.values.size(); ++g) {
      if (agent.values[g].is_negative()) {
        throw StructuralError("agent " + std::to_string(i) + " has negative value for good " +
                              std::to_string(g));
      }
    }
  }
}

void Instance::check_agent(AgentId i) const {
  if (i >= agents_.size()) throw StructuralError("unknown agent id " + std::to_string(i));
}

void Instance::check_bundle(const Bundle& bundle) const {
  if (!bundle.subset_of(all_goods())) {
    throw StructuralError("bundle " + bundle.str() + " references unknown goods");
  }
}

const Rational& Instance::cost(GoodId g) const {
  if (g >= costs_.size()) throw StructuralError("unknown good id " + std::to_string(g));
  return costs_[g];
}

const Rational& Instance::budget(AgentId i) const {
  check_agent(i);
  return agents_[i].budget;
}

const Rational& Instance::value(AgentId i, GoodId g) const {
  check_agent(i);
  if (g >= costs_.size()) throw StructuralError("unknown good id " + std::to_string(g));
  return agents_[i].values[g];
}

Instance Instance::with_budget(AgentId i, Rational budget) const {
  check_agent(i);
  auto agents = agents_;
  agents[i].budget = std::move(budget);
  return Instance(costs_, std::move(agents));
}

Instance Instance::with_values(AgentId i, std::vector<Rational> values) const {
  check_agent(i);
  auto agents = agents_;
  agents[i].values = std::move(values);
  return Instance(costs_, std::move(agents));
}

// ---------------------------------------------------------------------------
// Allocation

Allocation::Allocation(std::vector<Bundle> bundles, Bundle scope)
    : bundles_(std::move(bundles)), scope_(scope) {
  Bundle seen;
  for (std::size_t i = 0; i < bundles_.size(); ++i) {
    if (!bundles_[i].disjoint_from(seen)) {
      throw StructuralError("bundle of agent " + std::to_string(i) + " overlaps another bundle");
    }
    if (!bundles_[i].subset_of(scope_)) {
      throw StructuralError("bundle of agent " + std::to_string(i) + " leaves the scope");
    }
    seen = seen | bundles_[i];
  }
}

Allocation::Allocation(const Instance& instance, std::vector<Bundle> bundles)
    : Allocation(std::move(bundles), instance.all_goods()) {}

Allocation Allocation::empty(const Instance& instance) {
  return Allocation(std::vector<Bundle>(instance.num_agents()), instance.all_goods());
}

const Bundle& Allocation::bundle(AgentId i) const {
  if (i >= bundles_.size()) throw StructuralError("unknown agent id " + std::to_string(i));
  return bundles_[i];
}

Bundle Allocation::allocated() const {
  Bundle all;
  for (const auto& b : bundles_) all = all | b;
  return all;
}

Allocation Allocation::with_bundle(AgentId i, Bundle bundle) const {
  if (i >= bundles_.size()) throw StructuralError("unknown agent id " + std::to_string(i));
  auto bundles = bundles_;
  bundles[i] = bundle;
  return Allocation(std::move(bundles), scope_);
}

void check_allocation(const Instance& instance, const Allocation& allocation) {
  if (allocation.num_agents() != instance.num_agents()) {
    throw StructuralError("allocation has " + std::to_string(allocation.num_agents()) +
                          " bundles for " + std::to_string(instance.num_agents()) + " agents");
  }
  instance.check_bundle(allocation.scope());
}

// ---------------------------------------------------------------------------
// Values and knapsack

Rational bundle_cost(const Instance& instance, const Bundle& bundle) {
  instance.check_bundle(bundle);
  Rational total;
  for (GoodId g : bundle) total += instance.cost(g);
  return total;
}

Rational bundle_value(const Instance& instance, AgentId agent, const Bundle& bundle) {
  instance.check_agent(agent);
  instance.check_bundle(bundle);
  Rational total;
  for (GoodId g : bundle) total += instance.value(agent, g);
  return total;
}

namespace {

struct KnapsackItem {
  GoodId id;
  Rational cost;
  Rational value;
};

class KnapsackSearch {
 public:
  KnapsackSearch(std::vector<KnapsackItem> items, Rational budget)
      : items_(std::move(items)), budget_(std::move(budget)), suffix_(items_.size() + 1) {
    for (std::size_t k = items_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + items_[k].value;
  }

  KnapsackAnswer run() {
    Rational cost;
    Rational value;
    visit(0, cost, value, Bundle());
    return {best_value_, best_};
  }

 private:
  void visit(std::size_t k, Rational& cost, Rational& value, Bundle chosen) {
    if (have_best_ && value + suffix_[k] < best_value_) return;
    if (k == items_.size()) {
      if (!have_best_ || value > best_value_ || (value == best_value_ && lex_less(chosen, best_))) {
        best_value_ = value;
        best_ = chosen;
        have_best_ = true;
      }
      return;
    }
    const auto& item = items_[k];
    cost += item.cost;
    if (cost <= budget_) {
      value += item.value;
      visit(k + 1, cost, value, chosen.with(item.id));
      value -= item.value;
    }
    cost -= item.cost;
    visit(k + 1, cost, value, chosen);
  }

  std::vector<KnapsackItem> items_;
  Rational budget_;
  std::vector<Rational> suffix_;
  bool have_best_ = false;
  Rational best_value_;
  Bundle best_;
};

}  // namespace

KnapsackAnswer knapsack_vmax(const Instance& instance, AgentId agent, const Bundle& pool,
                             const Rational& budget) {
  instance.check_agent(agent);
  instance.check_bundle(pool);
  if (budget.is_negative()) throw PreconditionError("knapsack budget must be nonnegative");
  std::vector<KnapsackItem> items;
  for (GoodId g : pool) {
    if (instance.cost(g) <= budget) items.push_back({g, instance.cost(g), instance.value(agent, g)});
  }
  return KnapsackSearch(std::move(items), budget).run();
}

Rational vmax(const Instance& instance, AgentId agent, const Bundle& pool) {
  return knapsack_vmax(instance, agent, pool, instance.budget(agent)).value;
}

Bundle s_max(const Instance& instance, AgentId agent, const Bundle& bundle) {
  instance.check_bundle(bundle);
  if (bundle_cost(instance, bundle) <= instance.budget(agent)) return bundle;
  return knapsack_vmax(instance, agent, bundle, instance.budget(agent)).witness;
}

Rational monopoly_value(const Instance& instance, AgentId agent, const Rational& budget) {
  return knapsack_vmax(instance, agent, instance.all_goods(), budget).value;
}

bool is_budget_feasible(const Instance& instance, AgentId agent, const Bundle& bundle) {
  return bundle_cost(instance, bundle) <= instance.budget(agent);
}

bool is_budget_feasible(const Instance& instance, const Allocation& allocation) {
  check_allocation(instance, allocation);
  for (AgentId i = 0; i < allocation.num_agents(); ++i) {
    if (!is_budget_feasible(instance, i, allocation.bundle(i))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Envy predicates

bool envies(const Instance& instance, const Allocation& allocation, AgentId i,
            const Bundle& target) {
  check_allocation(instance, allocation);
  return vmax(instance, i, target) > bundle_value(instance, i, allocation.bundle(i));
}

std::optional<EfxEnvyWitness> find_efx_envy(const Instance& instance, const Rational& own_value,
                                             AgentId i, const Bundle& target) {
  instance.check_agent(i);
  instance.check_bundle(target);
  const Rational& budget = instance.budget(i);
  for (GoodId g : target) {
    if (instance.cost(g) > budget) continue;
    auto best = knapsack_vmax(instance, i, target.without(g), budget - instance.cost(g));
    if (best.value > own_value) return EfxEnvyWitness{best.witness.with(g), g};
  }
  return std::nullopt;
}

bool efx_envies(const Instance& instance, const Rational& own_value, AgentId i,
                const Bundle& target) {
  return find_efx_envy(instance, own_value, i, target).has_value();
}

std::optional<EfxViolation> find_efx_violation(const Instance& instance,
                                               const Allocation& allocation) {
  check_allocation(instance, allocation);
  for (AgentId i = 0; i < allocation.num_agents(); ++i) {
    const Rational own = bundle_value(instance, i, allocation.bundle(i));
    for (AgentId j = 0; j < allocation.num_agents(); ++j) {
      if (i == j) continue;
      if (auto w = find_efx_envy(instance, own, i, allocation.bundle(j))) {
        return EfxViolation{i, j, *w};
      }
    }
  }
  return std::nullopt;
}

std::optional<Ef1Violation> find_ef1_violation(const Instance& instance,
                                               const Allocation& allocation) {
  check_allocation(instance, allocation);
  for (AgentId i = 0; i < allocation.num_agents(); ++i) {
    const Rational own = bundle_value(instance, i, allocation.bundle(i));
    const Rational& budget = instance.budget(i);
    for (AgentId j = 0; j < allocation.num_agents(); ++j) {
      if (i == j) continue;
      const std::uint64_t mask = allocation.bundle(j).mask();
      for (std::uint64_t s = mask; s != 0; s = (s - 1) & mask) {
        const Bundle subset = Bundle::from_mask(s);
        if (bundle_cost(instance, subset) > budget) continue;
        Rational value;
        Rational top;
        for (GoodId g : subset) {
          value += instance.value(i, g);
          top = max(top, instance.value(i, g));
        }
        if (value - top > own) return Ef1Violation{i, j, subset};
      }
    }
  }
  return std::nullopt;
}

bool is_envy_free(const Instance& instance, const Allocation& allocation) {
  for (AgentId i = 0; i < allocation.num_agents(); ++i) {
    for (AgentId j = 0; j < allocation.num_agents(); ++j) {
      if (i != j && envies(instance, allocation, i, allocation.bundle(j))) return false;
    }
  }
  return true;
}

bool is_efx(const Instance& instance, const Allocation& allocation) {
  return !find_efx_violation(instance, allocation).has_value();
}

bool is_ef1(const Instance& instance, const Allocation& allocation) {
  return !find_ef1_violation(instance, allocation).has_value();
}

Rational nsw_product(const Instance& instance, const Allocation& allocation) {
  check_allocation(instance, allocation);
  Rational product(1);
  for (AgentId i = 0; i < allocation.num_agents(); ++i) {
    product *= bundle_value(instance, i, allocation.bundle(i));
  }
  return product;
}

Rational nsw_product(const Instance& instance, const Allocation& allocation,
                     std::span<const AgentId> agents) {
  check_allocation(instance, allocation);
  Rational product(1);
  for (AgentId i : agents) product *= bundle_value(instance, i, allocation.bundle(i));
  return product;
}

Instance normalize(const Instance& instance, const Allocation& opt) {
  check_allocation(instance, opt);
  std::vector<AgentSpec> agents = instance.agents();
  for (AgentId i = 0; i < agents.size(); ++i) {
    const Rational own = bundle_value(instance, i, opt.bundle(i));
    if (!own.is_positive()) {
      throw DegenerateOptimumError("degenerate optimum: agent " + std::to_string(i) +
                                   " values her optimum bundle at 0");
    }
    for (auto& v : agents[i].values) v /= own;
  }
  return Instance(instance.costs(), std::move(agents));
}

}  // namespace budgeted_efx
