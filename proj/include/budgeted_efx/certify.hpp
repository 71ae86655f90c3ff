#pragma once

#include <string>
#include <utility>
#include <vector>

#include "budgeted_efx/efx_three.hpp"
#include "budgeted_efx/efx_two.hpp"
#include "budgeted_efx/model.hpp"

namespace budgeted_efx {

/// One recomputed guarantee. Checks never trust algorithm state beyond
/// naming which bundles to look at.
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Certificate {
  std::vector<Check> checks;

  bool all_pass() const;
  const Check* find(const std::string& name) const;
  /// Names of failing checks, comma separated.
  std::string failures() const;
};

/// Guarantees of one efx_2a run: pair EFx and budget feasibility, the value
/// guarantees against the input, the halved product, no envy toward the
/// unmatched bundle, and the left-out conditions.
Certificate certify_two_agent(const Instance& instance, std::pair<AgentId, AgentId> pair,
                              const Allocation& input, const TwoAgentResult& result);

/// Guarantees of one efx_3a run: budget feasibility, EFx, the 1/171 ratio,
/// the bound of the branch taken and the per-agent bounds behind it.
Certificate certify_three_agent(const Instance& instance, const AlphaParams& alpha,
                                const ThreeAgentResult& result);

/// Product bound (normalized optimum = 1) of each else return point and of
/// the equal-budget branch.
Rational else_return_bound(ElseReturn point, const Rational& alpha);
Rational equal_budget_bound(const Rational& alpha);
/// (1/171)^3.
Rational three_agent_ratio();

}  // namespace budgeted_efx
