#pragma once

#include <array>
#include <optional>
#include <vector>

#include "budgeted_efx/efx_two.hpp"
#include "budgeted_efx/model.hpp"
#include "budgeted_efx/oracles.hpp"

namespace budgeted_efx {

struct AlphaParams {
  Rational alpha{1, 35};
  /// Refuse alpha above 1/35, where the else-case guarantees stop holding.
  bool guarantee_mode = true;
};

/// Largest alpha for which the three-agent guarantees are proven.
Rational max_guaranteed_alpha();

/// One optional good per agent, held back from the main pool.
struct SetAside {
  std::vector<std::optional<GoodId>> goods;
  /// v_i(s_i), zero when agent i has no set-aside good.
  std::vector<Rational> values;

  Bundle all() const;
};

struct PreprocessResult {
  Bundle pool;
  SetAside setaside;
  /// S_i: each agent's (up to) three most valued affordable goods.
  std::vector<Bundle> favorites;
};

/// Sets aside one good per agent through a maximum-weight matching of agents
/// to their favourite goods, subject to: an agent whose favourites meet her
/// bundle in `opt` gets a good at least as valuable as the best of those.
/// Ties go to the lexicographically smallest vector of matched ids, with
/// "unmatched" ordered after every good.
///
/// `instance` should be normalized against `opt`; the matching compares
/// weights across agents. Throws InvariantViolation if no matching satisfies
/// the constraint.
PreprocessResult preprocess(const Instance& instance, const Allocation& opt);

struct EqualBudgetTrace {
  Allocation opt_on_pool;
  /// Each agent's optimum bundle after trimming to cost at most B/n.
  std::vector<Bundle> trimmed;
  Bundle z;
  Allocation complete_efx;
  std::size_t rotations = 0;
  std::size_t swaps = 0;
};

struct EqualBudgetResult {
  Allocation allocation;
  EqualBudgetTrace trace;
};

/// Trims every bundle of `opt_on_pool` by dropping least value-per-cost goods
/// (zero-cost goods are never dropped; ties drop the lowest id), finds a
/// complete EFx allocation of what is left, then removes envy cycles.
///
/// Requires all budgets equal. The result's scope is opt_on_pool's scope.
EqualBudgetResult equal_budget_procedure(const Instance& instance, const Allocation& opt_on_pool,
                                         SearchBudget budget = {});

/// Hands the agent's goods out alternately to two parts, most valued first
/// (ties by lowest id), starting with `first`.
SplitPair round_robin_self_split(const Instance& instance, AgentId agent, const Bundle& pool);

enum class ElseReturn { kReturn1, kReturn2, kReturn3 };

struct ElseTrace {
  ElseReturn point = ElseReturn::kReturn1;
  /// Roles (a1, a2, a3) after the possible swap of a2 and a3.
  std::array<AgentId, 3> roles{};
  bool roles_swapped = false;
  Rational m2;
  Rational m3;
  Bundle x1;
  Allocation bar;
  TwoAgentResult pair23;
  std::optional<TwoAgentResult> pair12;
  std::optional<SplitPair> round_robin;
  Bundle dropped_part;
  Bundle x1_alt;
  bool upgraded = false;
};

struct ElseResult {
  Allocation allocation;
  ElseTrace trace;
};

/// The case where some higher-budget agent loses too much when cut to B1.
/// `roles` lists the agents by ascending budget. Goods dropped along the way
/// stay unallocated; the result's scope is `pool`.
ElseResult else_procedure(const Instance& instance, std::array<AgentId, 3> roles,
                          const Bundle& pool, const AlphaParams& alpha, SearchBudget budget = {});

enum class ThreeAgentBranch { kSmallInstance, kEqualBudget, kElse };

const char* to_string(ThreeAgentBranch branch);
const char* to_string(ElseReturn point);

struct ThreeAgentResult {
  Allocation allocation;
  ThreeAgentBranch branch = ThreeAgentBranch::kSmallInstance;
  Allocation opt;
  Rational opt_product;
  std::array<AgentId, 3> by_budget{};
  std::optional<Instance> normalized;
  std::optional<PreprocessResult> preprocess;
  Rational m2;
  Rational m3;
  Allocation before_setaside;
  std::vector<bool> took_setaside;
  std::optional<EqualBudgetResult> equal_budget;
  std::optional<ElseResult> else_case;
};

/// Budget-feasible EFx allocation for three agents whose NSW product is at
/// least (1/171)^3 of the optimum when alpha = 1/35.
///
/// Instances with at most three goods get the NSW optimum directly.
/// Throws PreconditionError for other agent counts or an out-of-range alpha,
/// and DegenerateOptimumError when the optimum gives someone nothing.
ThreeAgentResult efx_3a(const Instance& instance, const AlphaParams& alpha = {},
                        SearchBudget budget = {});

}  // namespace budgeted_efx
