#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "budgeted_efx/rational.hpp"

namespace budgeted_efx {

using GoodId = std::size_t;
using AgentId = std::size_t;

/// Bundles are bitsets, so instances are limited to this many goods. Every
/// search in the library is exponential in the good count long before this
/// limit matters.
inline constexpr std::size_t kMaxGoods = 64;

/// A set of goods, iterated in ascending id order.
class Bundle {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = GoodId;
    using difference_type = std::ptrdiff_t;
    using pointer = const GoodId*;
    using reference = GoodId;

    iterator() = default;
    explicit iterator(std::uint64_t rest) : rest_(rest) {}
    GoodId operator*() const { return static_cast<GoodId>(__builtin_ctzll(rest_)); }
    iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator&, const iterator&) = default;

   private:
    std::uint64_t rest_ = 0;
  };

  Bundle() = default;
  Bundle(std::initializer_list<GoodId> goods);
  explicit Bundle(std::span<const GoodId> goods);

  static Bundle from_mask(std::uint64_t mask) {
    Bundle b;
    b.mask_ = mask;
    return b;
  }
  /// Goods {0, ..., count-1}.
  static Bundle first_n(std::size_t count);

  std::uint64_t mask() const { return mask_; }
  bool contains(GoodId g) const { return g < kMaxGoods && ((mask_ >> g) & 1U) != 0; }
  std::size_t size() const { return static_cast<std::size_t>(__builtin_popcountll(mask_)); }
  bool empty() const { return mask_ == 0; }

  void insert(GoodId g);
  void erase(GoodId g) { mask_ &= ~(std::uint64_t{1} << g); }
  Bundle with(GoodId g) const {
    Bundle b = *this;
    b.insert(g);
    return b;
  }
  Bundle without(GoodId g) const {
    Bundle b = *this;
    b.erase(g);
    return b;
  }

  bool subset_of(const Bundle& other) const { return (mask_ & ~other.mask_) == 0; }
  bool disjoint_from(const Bundle& other) const { return (mask_ & other.mask_) == 0; }

  std::vector<GoodId> goods() const;
  /// "{0,2,5}"
  std::string str() const;

  iterator begin() const { return iterator(mask_); }
  iterator end() const { return iterator(0); }

  friend Bundle operator|(Bundle a, Bundle b) { return from_mask(a.mask_ | b.mask_); }
  friend Bundle operator&(Bundle a, Bundle b) { return from_mask(a.mask_ & b.mask_); }
  /// Set difference.
  friend Bundle operator-(Bundle a, Bundle b) { return from_mask(a.mask_ & ~b.mask_); }
  friend bool operator==(const Bundle&, const Bundle&) = default;

 private:
  std::uint64_t mask_ = 0;
};

/// Lexicographic order on the ascending good-id sequences of two bundles,
/// with a proper prefix ordered first ({0} < {0,1} < {1}).
bool lex_less(const Bundle& a, const Bundle& b);

struct AgentSpec {
  Rational budget;
  std::vector<Rational> values;  // one per good
};

/// Goods with costs, agents with budgets and additive values. Ids are dense
/// 0-based indices. Immutable once built.
class Instance {
 public:
  /// Throws StructuralError on negative quantities, mismatched value lists,
  /// or more than kMaxGoods goods.
  Instance(std::vector<Rational> costs, std::vector<AgentSpec> agents);

  std::size_t num_goods() const { return costs_.size(); }
  std::size_t num_agents() const { return agents_.size(); }

  const Rational& cost(GoodId g) const;
  const Rational& budget(AgentId i) const;
  const Rational& value(AgentId i, GoodId g) const;
  const std::vector<Rational>& costs() const { return costs_; }
  const std::vector<AgentSpec>& agents() const { return agents_; }

  Bundle all_goods() const { return Bundle::first_n(num_goods()); }

  Instance with_budget(AgentId i, Rational budget) const;
  Instance with_values(AgentId i, std::vector<Rational> values) const;

  void check_agent(AgentId i) const;
  void check_bundle(const Bundle& bundle) const;

 private:
  std::vector<Rational> costs_;
  std::vector<AgentSpec> agents_;
};

/// Disjoint bundles per agent inside a scope of eligible goods. Goods in the
/// scope that no agent holds form the unallocated pool.
class Allocation {
 public:
  Allocation() = default;
  /// Throws StructuralError if bundles overlap or leave the scope.
  Allocation(std::vector<Bundle> bundles, Bundle scope);
  /// Scope defaults to every good of the instance.
  Allocation(const Instance& instance, std::vector<Bundle> bundles);

  static Allocation empty(const Instance& instance);

  std::size_t num_agents() const { return bundles_.size(); }
  const Bundle& bundle(AgentId i) const;
  const std::vector<Bundle>& bundles() const { return bundles_; }
  const Bundle& scope() const { return scope_; }

  Bundle allocated() const;
  Bundle unallocated() const { return scope_ - allocated(); }

  Allocation with_bundle(AgentId i, Bundle bundle) const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Bundle> bundles_;
  Bundle scope_;
};

/// Checks agent count and good ids against the instance.
void check_allocation(const Instance& instance, const Allocation& allocation);

struct KnapsackAnswer {
  Rational value;
  Bundle witness;
};

Rational bundle_cost(const Instance& instance, const Bundle& bundle);
Rational bundle_value(const Instance& instance, AgentId agent, const Bundle& bundle);

/// Best value the agent can take from `pool` within `budget`. Among optimal
/// subsets the witness is the lex_less-smallest one.
KnapsackAnswer knapsack_vmax(const Instance& instance, AgentId agent, const Bundle& pool,
                             const Rational& budget);

/// knapsack_vmax under the agent's own budget; returns only the value.
Rational vmax(const Instance& instance, AgentId agent, const Bundle& pool);

/// The agent's favourite affordable subset of `bundle`: the bundle itself
/// when she can afford all of it, otherwise the knapsack witness.
Bundle s_max(const Instance& instance, AgentId agent, const Bundle& bundle);

/// Best value over all goods within `budget`.
Rational monopoly_value(const Instance& instance, AgentId agent, const Rational& budget);

bool is_budget_feasible(const Instance& instance, AgentId agent, const Bundle& bundle);
bool is_budget_feasible(const Instance& instance, const Allocation& allocation);

/// Agent i prefers some affordable subset of `target` to her own bundle.
bool envies(const Instance& instance, const Allocation& allocation, AgentId i,
            const Bundle& target);

/// An affordable S within the target and a good g of S with
/// v_i(S \ {g}) above the envier's own value.
struct EfxEnvyWitness {
  Bundle subset;
  GoodId removed;
};

/// Searches one removed good at a time: S = W + {g} is affordable exactly
/// when W fits in B_i - c(g), so the search is a knapsack over the rest of
/// the target with the reduced budget.
std::optional<EfxEnvyWitness> find_efx_envy(const Instance& instance, const Rational& own_value,
                                             AgentId i, const Bundle& target);

bool efx_envies(const Instance& instance, const Rational& own_value, AgentId i,
                const Bundle& target);

struct EfxViolation {
  AgentId envier;
  AgentId envied;
  EfxEnvyWitness witness;
};

/// First violating ordered pair (envier-major order), if any.
std::optional<EfxViolation> find_efx_violation(const Instance& instance,
                                               const Allocation& allocation);

/// An affordable nonempty S in another bundle such that removing any single
/// good still leaves the envier strictly worse off.
struct Ef1Violation {
  AgentId envier;
  AgentId envied;
  Bundle subset;
};

std::optional<Ef1Violation> find_ef1_violation(const Instance& instance,
                                               const Allocation& allocation);

bool is_envy_free(const Instance& instance, const Allocation& allocation);
bool is_efx(const Instance& instance, const Allocation& allocation);
bool is_ef1(const Instance& instance, const Allocation& allocation);

/// Product of agent values, without the n-th root. Comparisons between
/// allocations with the same agent count are unaffected by dropping the root.
Rational nsw_product(const Instance& instance, const Allocation& allocation);
Rational nsw_product(const Instance& instance, const Allocation& allocation,
                     std::span<const AgentId> agents);

/// Rescales each agent's values so that her bundle in `opt` is worth 1.
/// Throws DegenerateOptimumError if some agent values her bundle at zero.
Instance normalize(const Instance& instance, const Allocation& opt);

}  // namespace budgeted_efx
