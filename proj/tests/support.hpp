// Brute-force reference implementations and random generators for tests.
// Nothing here shares code with the library's searches.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "budgeted_efx/model.hpp"

namespace budgeted_efx {

// Readable gtest failure messages.
inline void PrintTo(const Rational& value, std::ostream* os) { *os << value.str(); }
inline void PrintTo(const Bundle& bundle, std::ostream* os) { *os << bundle.str(); }

}  // namespace budgeted_efx

namespace testing_support {

using budgeted_efx::AgentId;
using budgeted_efx::Allocation;
using budgeted_efx::Bundle;
using budgeted_efx::GoodId;
using budgeted_efx::Instance;
using budgeted_efx::Rational;

std::filesystem::path data_dir();

/// T1 with eps = 1/10: costs (1/2, 1/2, 1), budgets 1 and 1.
Instance t1();

Rational r(std::int64_t num, std::int64_t den = 1);

/// Every subset of `pool` as a bundle, in increasing mask order.
std::vector<Bundle> subsets(const Bundle& pool);

struct BruteKnapsack {
  Rational value;
  Bundle witness;
};

/// Scans all subsets; ties broken by lex_less.
BruteKnapsack brute_knapsack(const Instance& inst, AgentId agent, const Bundle& pool,
                             const Rational& budget);

/// The definition itself: some affordable S within the target and g in S
/// with v(S minus g) above `own`.
bool brute_efx_envies(const Instance& inst, const Rational& own, AgentId i, const Bundle& target);
bool brute_is_efx(const Instance& inst, const Allocation& alloc);

/// Some affordable nonempty S within another bundle stays strictly better
/// than the envier's bundle after removing any one good.
bool brute_is_ef1(const Instance& inst, const Allocation& alloc);

/// All assignments of the pool to the listed agents or nobody, as an
/// odometer over assignment vectors; first strict maximum of the product.
Allocation brute_max_nsw(const Instance& inst, const std::vector<AgentId>& agents,
                         const Bundle& pool);

/// Every budget-feasible allocation of all goods among all agents.
std::vector<Allocation> all_feasible_allocations(const Instance& inst);

struct RandomSpec {
  std::size_t n = 2;
  std::size_t m_min = 1;
  std::size_t m_max = 6;
  std::int64_t cost_max = 10;
  std::int64_t value_max = 10;
  std::int64_t budget_min = 1;
  std::int64_t budget_max = 20;
  /// Chance a value is zero.
  double zero_probability = 0.2;
  /// Chance a cost is zero.
  double zero_cost_probability = 0.0;
  /// Draw fractional costs and values with denominators up to 4.
  bool fractional = false;
};

Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec);

/// Random budget-feasible allocation: goods go to a random agent who can
/// still afford them, or stay out.
Allocation random_feasible_allocation(std::mt19937_64& rng, const Instance& inst);

}  // namespace testing_support
