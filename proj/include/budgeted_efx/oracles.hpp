#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "budgeted_efx/model.hpp"

namespace budgeted_efx {

/// Cap on enumerated search nodes. Exceeding it throws
/// SearchBudgetExhausted rather than returning a partial answer.
struct SearchBudget {
  std::uint64_t max_assignments = 50'000'000;
};

/// Two disjoint parts whose union is the split pool.
struct SplitPair {
  Bundle first;
  Bundle second;
};

/// Exact maximum of the product of the listed agents' values over
/// budget-feasible allocations of (a subset of) `pool`.
///
/// Branch and bound over per-good assignments in ascending good order; each
/// good goes to one of `agents` (in the given order) or stays unallocated,
/// and the first maximizer in that order wins ties. Agents not listed keep
/// empty bundles; the returned scope is `pool`.
Allocation max_nsw_allocation(const Instance& instance, std::span<const AgentId> agents,
                              const Bundle& pool, SearchBudget budget = {});

/// Same answer as max_nsw_allocation from plain enumeration without any
/// bound, for cross-checking the pruned search.
Allocation max_nsw_allocation_exhaustive(const Instance& instance,
                                         std::span<const AgentId> agents, const Bundle& pool,
                                         SearchBudget budget = {});

/// First EFx allocation of every good in `pool` among `agents`, in
/// lexicographic order of the assignment vector.
///
/// Requires c(pool) to fit every listed agent's budget, so every sub-bundle
/// is affordable to everyone. Throws ExistenceViolation if no complete EFx
/// allocation exists.
Allocation complete_efx_allocation(const Instance& instance, std::span<const AgentId> agents,
                                   const Bundle& pool, SearchBudget budget = {});

using SetValuation = std::function<Rational(const Bundle&)>;

/// Splits `pool` in two under a single monotone valuation `u`, maximizing
/// (u(worse), |worse|, u(better), |better|) lexicographically, where the
/// worse part has the smaller (u, size) key. Remaining ties go to the
/// smallest `first` under lex_less. `first` is the better part; with equal
/// keys it is the lex_less-smaller part.
///
/// The result satisfies u(second) >= u(first \ {g}) for every g in first.
SplitPair leximin_pp_split(const Bundle& pool, const SetValuation& u);

enum class FairnessPredicate { kAny, kEnvyFree, kEf1, kEfx };

struct PredicateOptimum {
  Allocation allocation;
  Rational product;
};

/// Enumerates every budget-feasible allocation of all goods' subsets and
/// returns the NSW-product maximizer among those passing `predicate`
/// (ties as in max_nsw_allocation).
PredicateOptimum best_allocation_under_predicate(const Instance& instance,
                                                 FairnessPredicate predicate,
                                                 SearchBudget budget = {});

/// Which allocations may dominate.
///  - kAnyAllocation: any disjoint assignment of the scope's goods, with
///    additive values even over bundles the holder could not afford.
///  - kBudgetFeasible: only budget-feasible allocations.
enum class ParetoScope { kAnyAllocation, kBudgetFeasible };

/// True iff no allocation in `scope` gives every agent at least her current
/// value and some agent strictly more.
bool is_pareto_efficient(const Instance& instance, const Allocation& allocation,
                         ParetoScope scope = ParetoScope::kAnyAllocation,
                         SearchBudget budget = {});

}  // namespace budgeted_efx
