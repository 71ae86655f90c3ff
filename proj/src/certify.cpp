#include "budgeted_efx/certify.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace budgeted_efx {

bool Certificate::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* Certificate::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string Certificate::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (!out.empty()) out += ",";
    out += c.name;
  }
  return out;
}

Rational else_return_bound(ElseReturn point, const Rational& alpha) {
  const Rational one(1);
  switch (point) {
    case ElseReturn::kReturn1: return (one - alpha) * (one - alpha) / Rational(4 * 6 * 6);
    case ElseReturn::kReturn2: return (one - alpha) / Rational(4 * 7 * 6);
    case ElseReturn::kReturn3: return (one - Rational(11) * alpha) / Rational(6 * 13 * 21);
  }
  return Rational();
}

Rational equal_budget_bound(const Rational& alpha) { return alpha * alpha / Rational(15 * 15 * 18); }

Rational three_agent_ratio() { return pow(Rational(1, 171), 3); }

namespace {

void add(Certificate& cert, std::string name, bool pass, std::string detail = {}) {
  cert.checks.push_back({std::move(name), pass, std::move(detail)});
}

std::string ge_detail(const Rational& lhs, const Rational& rhs) {
  return lhs.str() + " >= " + rhs.str();
}

void add_ge(Certificate& cert, std::string name, const Rational& lhs, const Rational& rhs) {
  add(cert, std::move(name), lhs >= rhs, ge_detail(lhs, rhs));
}

void add_efx(Certificate& cert, const Instance& instance, const Allocation& allocation) {
  const auto violation = find_efx_violation(instance, allocation);
  std::string detail;
  if (violation) {
    std::ostringstream out;
    out << "agent " << violation->envier << " vs " << violation->envied << ", S="
        << violation->witness.subset.str() << ", g=" << violation->witness.removed;
    detail = out.str();
  }
  add(cert, "efx", !violation, detail);
}

constexpr std::array<std::array<std::size_t, 3>, 6> kPermutations{
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

}  // namespace

Certificate certify_two_agent(const Instance& instance, std::pair<AgentId, AgentId> pair,
                              const Allocation& input, const TwoAgentResult& result) {
  Certificate cert;
  const auto [a, b] = pair;
  const Allocation& out = result.allocation;
  const Bundle fa = out.bundle(a);
  const Bundle fb = out.bundle(b);
  add(cert, "budget-feasible",
      is_budget_feasible(instance, a, fa) && is_budget_feasible(instance, b, fb));

  const Rational va = bundle_value(instance, a, fa);
  const Rational vb = bundle_value(instance, b, fb);
  const auto a_env = find_efx_envy(instance, va, a, fb);
  const auto b_env = find_efx_envy(instance, vb, b, fa);
  add(cert, "efx", !a_env && !b_env);

  const Rational in_a = bundle_value(instance, a, input.bundle(a));
  const Rational in_b = bundle_value(instance, b, input.bundle(b));
  const Rational two(2);
  const bool guarantee = (va >= in_a && two * vb >= in_b) || (vb >= in_b && two * va >= in_a);
  add(cert, "value-guarantee", guarantee,
      "(" + va.str() + "," + vb.str() + ") from (" + in_a.str() + "," + in_b.str() + ")");
  if (result.trace.branch == TwoAgentBranch::kRemovalLoop && result.trace.envier) {
    const AgentId e = *result.trace.envier;
    add_ge(cert, "envier-keeps-value", e == a ? va : vb, e == a ? in_a : in_b);
  }
  add_ge(cert, "half-product", two * va * vb, in_a * in_b);

  const Bundle& r = result.unallocated_r;
  add(cert, "no-envy-unallocated",
      vmax(instance, a, r) <= va && vmax(instance, b, r) <= vb, "R=" + r.str());

  // The agent with the larger budget (either, on a tie) keeps her whole
  // matched bundle; anything left out comes from the other one.
  const Bundle& rp = result.leftout_rprime;
  const AgentId high = instance.budget(a) >= instance.budget(b) ? a : b;
  const AgentId low = high == a ? b : a;
  const Bundle matched_high = high == a ? result.matched[0] : result.matched[1];
  const Bundle matched_low = high == a ? result.matched[1] : result.matched[0];
  const Bundle final_high = out.bundle(high);
  const Rational v_low = bundle_value(instance, low, out.bundle(low));
  const Rational v_high = bundle_value(instance, high, final_high);
  bool leftout = final_high == matched_high && rp.subset_of(matched_low);
  leftout = leftout && vmax(instance, low, rp) <= v_low;
  leftout = leftout && !efx_envies(instance, v_high, high, rp);
  add(cert, "left-out", leftout, "R'=" + rp.str());
  return cert;
}

Certificate certify_three_agent(const Instance& instance, const AlphaParams& alpha,
                                const ThreeAgentResult& result) {
  Certificate cert;
  const Allocation& x = result.allocation;
  add(cert, "budget-feasible", is_budget_feasible(instance, x));
  add_efx(cert, instance, x);
  const Rational product = nsw_product(instance, x);
  add_ge(cert, "nsw-ratio", product, three_agent_ratio() * result.opt_product);
  if (result.branch == ThreeAgentBranch::kSmallInstance) {
    add(cert, "small-instance-optimal", x == result.opt);
    return cert;
  }

  const Instance& norm = *result.normalized;
  const PreprocessResult& pre = *result.preprocess;
  const SetAside& sa = pre.setaside;
  const Rational& a = alpha.alpha;
  std::array<Rational, 3> s;
  std::array<Rational, 3> rest;  // normalized value of the optimum bundle minus set-aside goods
  std::array<Rational, 3> before;
  std::array<Rational, 3> final_value;
  for (AgentId i = 0; i < 3; ++i) {
    s[i] = sa.goods[i] ? norm.value(i, *sa.goods[i]) : Rational();
    rest[i] = bundle_value(norm, i, result.opt.bundle(i) & pre.pool);
    before[i] = bundle_value(norm, i, result.before_setaside.bundle(i));
    final_value[i] = bundle_value(norm, i, x.bundle(i));
  }

  bool maxval = true;
  for (AgentId i = 0; i < 3; ++i) {
    for (GoodId g : pre.pool) {
      if (norm.cost(g) <= norm.budget(i) && norm.value(i, g) > s[i]) maxval = false;
    }
  }
  add(cert, "preprocess-maxval", maxval);

  const Rational one(1);
  bool remaining = false;
  for (const auto& p : kPermutations) {
    const auto [i, j, k] = p;
    const bool c1 = rest[i] >= one - Rational(3) * s[i] && rest[j] == one && rest[k] == one;
    const bool c2 =
        rest[i] >= one - Rational(2) * s[i] && rest[j] >= one - s[j] && rest[k] == one;
    const bool c3 = rest[i] >= one - s[i] && rest[j] >= one - s[j] && rest[k] >= one - s[k];
    remaining = remaining || c1 || c2 || c3;
  }
  add(cert, "preprocess-remainingval", remaining);

  bool setaside_ok = true;
  for (AgentId i = 0; i < 3; ++i) setaside_ok = setaside_ok && final_value[i] >= before[i];
  add(cert, "setaside-monotone", setaside_ok);

  const Rational normalized_product = final_value[0] * final_value[1] * final_value[2];
  if (result.branch == ThreeAgentBranch::kEqualBudget) {
    const EqualBudgetTrace& eq = result.equal_budget->trace;
    std::array<Rational, 3> opt_pool;
    bool trim_ok = true;
    for (AgentId i = 0; i < 3; ++i) {
      opt_pool[i] = bundle_value(norm, i, eq.opt_on_pool.bundle(i));
      trim_ok = trim_ok &&
                bundle_value(norm, i, eq.trimmed[i]) >= opt_pool[i] / Rational(3) - s[i];
    }
    add(cert, "remaining-value", trim_ok);
    bool individual = false;
    for (const auto& p : kPermutations) {
      const auto [i, j, k] = p;
      individual = individual ||
                   (before[i] >= opt_pool[i] / Rational(9) - s[i] / Rational(3) &&
                    before[j] >= opt_pool[j] / Rational(9) - Rational(2) * s[j] / Rational(3) &&
                    before[k] >= opt_pool[k] / Rational(9) - s[k]);
    }
    add(cert, "equal-budget-individual", individual);
    add_ge(cert, "branch-bound", normalized_product, equal_budget_bound(a));
    return cert;
  }

  const ElseTrace& tr = result.else_case->trace;
  const auto [r1, r2, r3] = tr.roles;
  const Rational five(5);
  switch (tr.point) {
    case ElseReturn::kReturn1:
      add_ge(cert, "agent1-bound", before[r1], rest[r1]);
      add_ge(cert, "agent2-bound", before[r2], (rest[r2] - s[r2] - a) / five);
      add_ge(cert, "agent3-bound", before[r3], (rest[r3] - s[r3] - a) / five);
      break;
    case ElseReturn::kReturn2:
      add_ge(cert, "agent1-bound", before[r1], rest[r1]);
      add_ge(cert, "agent2-bound", before[r2], (rest[r2] - s[r2]) / Rational(6));
      add_ge(cert, "agent3-bound", before[r3], (rest[r3] - s[r3] - a) / five);
      break;
    case ElseReturn::kReturn3:
      add_ge(cert, "agent1-bound", before[r1], (rest[r1] - s[r1]) / Rational(2));
      add_ge(cert, "agent2-bound", before[r2], (rest[r2] - s[r2]) / Rational(12));
      add_ge(cert, "agent3-bound", before[r3],
             (rest[r3] - Rational(11) * s[r3] - Rational(11) * a) / Rational(10));
      break;
  }
  add_ge(cert, "branch-bound", normalized_product, else_return_bound(tr.point, a));
  return cert;
}

}  // namespace budgeted_efx
