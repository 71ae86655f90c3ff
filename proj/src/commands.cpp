#include "budgeted_efx/commands.hpp"

#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "budgeted_efx/certify.hpp"
#include "budgeted_efx/efx_three.hpp"
#include "budgeted_efx/efx_two.hpp"
#include "budgeted_efx/errors.hpp"

namespace budgeted_efx {

namespace {

std::vector<AgentId> every_agent(const Instance& instance) {
  std::vector<AgentId> agents(instance.num_agents());
  for (AgentId i = 0; i < agents.size(); ++i) agents[i] = i;
  return agents;
}

Json optional_bundle(const std::optional<GoodId>& g) { return g ? Json(*g) : Json(nullptr); }

Json split_json(const SplitPair& split) {
  return {{"first", bundle_to_json(split.first)}, {"second", bundle_to_json(split.second)}};
}

Json checks_json(const Certificate& cert) {
  Json arr = Json::array();
  for (const auto& c : cert.checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return arr;
}

Json two_agent_trace_json(const TwoAgentResult& r) {
  const TwoAgentTrace& t = r.trace;
  Json graph = Json::array();
  for (const auto& b : t.graph_bundles) {
    graph.push_back({{"label", b.label}, {"goods", bundle_to_json(b.goods)}});
  }
  Json removed = Json::array();
  for (GoodId g : t.removed) removed.push_back(g);
  return {{"branch", to_string(t.branch)},
          {"relabeled", t.relabeled},
          {"envier", t.envier ? Json(*t.envier) : Json(nullptr)},
          {"envied", t.envied ? Json(*t.envied) : Json(nullptr)},
          {"iterations", t.iterations},
          {"removed", removed},
          {"split", t.split ? split_json(*t.split) : Json(nullptr)},
          {"graph_bundles", graph},
          {"matched_index", graph.empty() ? Json(nullptr) : Json(t.matched_index)},
          {"matched", {bundle_to_json(r.matched[0]), bundle_to_json(r.matched[1])}},
          {"unallocated_r", bundle_to_json(r.unallocated_r)},
          {"leftout_rprime", bundle_to_json(r.leftout_rprime)},
          {"input_values", {t.input_values[0].str(), t.input_values[1].str()}}};
}

std::string three_agent_branch(const ThreeAgentResult& r) {
  if (r.branch == ThreeAgentBranch::kElse) return to_string(r.else_case->trace.point);
  return to_string(r.branch);
}

Json three_agent_trace_json(const ThreeAgentResult& r) {
  Json t = {{"branch", three_agent_branch(r)}, {"opt", allocation_to_json(r.opt)}};
  if (r.branch == ThreeAgentBranch::kSmallInstance) {
    t["note"] = "at most three goods: the NSW optimum is returned";
    return t;
  }
  t["by_budget"] = r.by_budget;
  t["m2"] = r.m2.str();
  t["m3"] = r.m3.str();
  const PreprocessResult& pre = *r.preprocess;
  Json setaside = Json::array();
  Json sa_values = Json::array();
  Json favorites = Json::array();
  for (AgentId i = 0; i < 3; ++i) {
    setaside.push_back(optional_bundle(pre.setaside.goods[i]));
    sa_values.push_back(pre.setaside.values[i].str());
    favorites.push_back(bundle_to_json(pre.favorites[i]));
  }
  t["preprocess"] = {{"setaside", setaside},
                     {"setaside_values", sa_values},
                     {"favorites", favorites},
                     {"pool", bundle_to_json(pre.pool)}};
  t["before_setaside"] = allocation_to_json(r.before_setaside);
  t["took_setaside"] = r.took_setaside;
  if (r.equal_budget) {
    const EqualBudgetTrace& eq = r.equal_budget->trace;
    Json trimmed = Json::array();
    for (const auto& b : eq.trimmed) trimmed.push_back(bundle_to_json(b));
    t["equal_budget"] = {{"opt_on_pool", allocation_to_json(eq.opt_on_pool)},
                         {"trimmed", trimmed},
                         {"z", bundle_to_json(eq.z)},
                         {"complete_efx", allocation_to_json(eq.complete_efx)},
                         {"rotations", eq.rotations},
                         {"swaps", eq.swaps}};
  }
  if (r.else_case) {
    const ElseTrace& e = r.else_case->trace;
    Json j = {{"return_point", to_string(e.point)},
              {"roles", e.roles},
              {"roles_swapped", e.roles_swapped},
              {"x1", bundle_to_json(e.x1)},
              {"bar", allocation_to_json(e.bar)},
              {"pair23", two_agent_trace_json(e.pair23)}};
    if (e.pair12) {
      j["pair12"] = two_agent_trace_json(*e.pair12);
      j["round_robin"] = split_json(*e.round_robin);
      j["dropped_part"] = bundle_to_json(e.dropped_part);
      j["x1_alt"] = bundle_to_json(e.x1_alt);
      j["upgraded"] = e.upgraded;
    }
    t["else"] = j;
  }
  return t;
}

Json ratio_check(const std::string& reference, const Rational& reference_product,
                 const Rational& factor, const Rational& product) {
  Json j = {{"reference", reference},
            {"reference_product", reference_product.str()},
            {"required_factor", factor.str()},
            {"pass", product >= factor * reference_product}};
  j["achieved"] = reference_product.is_positive() ? Json((product / reference_product).str())
                                                   : Json(nullptr);
  return j;
}

Json values_json(const Instance& instance, const Allocation& allocation) {
  Json values = Json::array();
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    values.push_back(bundle_value(instance, i, allocation.bundle(i)).str());
  }
  return values;
}

Json budgets_json(const Instance& instance, const Allocation& allocation) {
  Json arr = Json::array();
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    arr.push_back({{"budget", instance.budget(i).str()},
                   {"spent", bundle_cost(instance, allocation.bundle(i)).str()}});
  }
  return arr;
}

std::string efx_witness_text(const Json& cert) {
  const Json& w = cert["efx_witness"];
  std::ostringstream out;
  out << "EFx violation: agent " << w["envier"].get<std::size_t>() << " toward agent "
      << w["envied"].get<std::size_t>() << ", S=" << w["subset"].dump()
      << ", g=" << w["removed"].get<std::size_t>();
  return out.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

}  // namespace

SearchBudget resolve_cap(std::optional<std::uint64_t> flag) {
  SearchBudget budget;
  if (flag) {
    budget.max_assignments = *flag;
  } else if (const char* env = std::getenv("BUDGETED_EFX_CAP"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      budget.max_assignments = v;
    } catch (const std::exception&) {
      throw PreconditionError(std::string("BUDGETED_EFX_CAP is not a number: ") + env);
    }
  }
  if (budget.max_assignments == 0) throw PreconditionError("search cap must be positive");
  return budget;
}

Json certificate_json(const Instance& instance, const Allocation& allocation) {
  Json cert;
  cert["budget_feasible"] = is_budget_feasible(instance, allocation);
  cert["envy_free"] = is_envy_free(instance, allocation);
  const auto ef1 = find_ef1_violation(instance, allocation);
  cert["ef1"] = !ef1;
  cert["ef1_witness"] = ef1 ? Json{{"envier", ef1->envier},
                                   {"envied", ef1->envied},
                                   {"subset", bundle_to_json(ef1->subset)}}
                            : Json(nullptr);
  const auto efx = find_efx_violation(instance, allocation);
  cert["efx"] = !efx;
  cert["efx_witness"] = efx ? Json{{"envier", efx->envier},
                                   {"envied", efx->envied},
                                   {"subset", bundle_to_json(efx->witness.subset)},
                                   {"removed", efx->witness.removed}}
                            : Json(nullptr);
  return cert;
}

SolveOutcome solve(const Instance& instance, const SolveOptions& options,
                   const std::optional<Allocation>& seed) {
  const SearchBudget budget = resolve_cap(options.cap);
  const std::vector<AgentId> agents = every_agent(instance);
  Json report;
  report["algorithm"] = options.algorithm;
  report["input_hash"] = sha256_hex(serialize_instance(instance));

  Allocation allocation;
  Rational opt_product;
  Certificate cert;
  if (options.algorithm == "oracle-nsw") {
    allocation = max_nsw_allocation(instance, agents, instance.all_goods(), budget);
    opt_product = nsw_product(instance, allocation);
    cert.checks.push_back({"budget-feasible", is_budget_feasible(instance, allocation), ""});
    report["ratio_check"] = ratio_check("opt", opt_product, Rational(1), opt_product);
    report["trace"] = Json::object();
  } else if (options.algorithm == "oracle-efx") {
    const PredicateOptimum best =
        best_allocation_under_predicate(instance, FairnessPredicate::kEfx, budget);
    allocation = best.allocation;
    opt_product = nsw_product(instance, max_nsw_allocation(instance, agents, instance.all_goods(), budget));
    cert.checks.push_back({"budget-feasible", is_budget_feasible(instance, allocation), ""});
    cert.checks.push_back({"efx", is_efx(instance, allocation), ""});
    Json info = ratio_check("opt", opt_product, Rational(0), best.product);
    info["informational"] = true;
    report["ratio_check"] = info;
    report["trace"] = Json::object();
  } else if (options.algorithm == "efx2") {
    if (instance.num_agents() != 2) throw PreconditionError("efx2 needs exactly two agents");
    const Allocation opt = max_nsw_allocation(instance, agents, instance.all_goods(), budget);
    opt_product = nsw_product(instance, opt);
    const Allocation input = seed ? *seed : opt;
    const TwoAgentResult result = efx_2a(instance, {0, 1}, input);
    allocation = result.allocation;
    cert = certify_two_agent(instance, {0, 1}, input, result);
    report["seed_allocation"] = allocation_to_json(input);
    report["ratio_check"] = ratio_check(seed ? "seed" : "opt", nsw_product(instance, input),
                                        Rational(1, 2), nsw_product(instance, allocation));
    report["trace"] = two_agent_trace_json(result);
  } else if (options.algorithm == "efx3") {
    if (instance.num_agents() != 3) throw PreconditionError("efx3 needs exactly three agents");
    AlphaParams alpha;
    try {
      alpha.alpha = Rational::parse(options.alpha);
    } catch (const std::exception& e) {
      throw PreconditionError(std::string("--alpha: ") + e.what());
    }
    alpha.guarantee_mode = !options.experimental_alpha;
    const ThreeAgentResult result = efx_3a(instance, alpha, budget);
    allocation = result.allocation;
    opt_product = result.opt_product;
    cert = certify_three_agent(instance, alpha, result);
    report["alpha"] = alpha.alpha.str();
    report["ratio_check"] =
        ratio_check("opt", opt_product, three_agent_ratio(), nsw_product(instance, allocation));
    report["trace"] = three_agent_trace_json(result);
  } else {
    throw PreconditionError("unknown algorithm '" + options.algorithm + "'");
  }

  report["allocation"] = allocation_to_json(allocation);
  report["values"] = values_json(instance, allocation);
  report["budgets"] = budgets_json(instance, allocation);
  report["nsw_product"] = nsw_product(instance, allocation).str();
  report["opt_product"] = opt_product.str();
  report["certificate"] = certificate_json(instance, allocation);
  report["guarantees"] = checks_json(cert);
  const bool ok = cert.all_pass() && report["ratio_check"]["pass"].get<bool>();
  report["ok"] = ok;
  return {report, ok ? kExitOk : kExitGuarantee};
}

Json verify_report(const Instance& instance, const Allocation& allocation, SearchBudget budget) {
  Json report = certificate_json(instance, allocation);
  report["nsw_product"] = nsw_product(instance, allocation).str();
  report["values"] = values_json(instance, allocation);
  report["budgets"] = budgets_json(instance, allocation);
  try {
    report["pareto"] = is_pareto_efficient(instance, allocation, ParetoScope::kAnyAllocation, budget);
  } catch (const SearchBudgetExhausted&) {
    report["pareto"] = nullptr;
  }
  if (report["budget_feasible"].get<bool>()) {
    try {
      report["pareto_budget_feasible"] =
          is_pareto_efficient(instance, allocation, ParetoScope::kBudgetFeasible, budget);
    } catch (const SearchBudgetExhausted&) {
      report["pareto_budget_feasible"] = nullptr;
    }
  } else {
    report["pareto_budget_feasible"] = nullptr;
  }
  return report;
}

GenParams suite_params(const std::string& suite, std::uint64_t seed, std::size_t count) {
  GenParams p;
  p.seed = seed;
  p.cost_min = 1;
  p.cost_max = 20;
  p.value_min = 0;
  p.value_max = 20;
  p.base_budget_min = 5;
  p.base_budget_max = 20;
  p.budget_spread = 10;
  if (suite == "two-agent") {
    p.count = count ? count : 200;
    p.n = 2;
    p.m_min = 2;
    p.m_max = 10;
  } else if (suite == "three-agent") {
    // Sparse interests make the low-monopoly else branches reachable.
    p.count = count ? count : 100;
    p.n = 3;
    p.m_min = 4;
    p.m_max = 9;
    p.zero_probability = 0.3;
  } else if (suite == "oracles") {
    p.count = count ? count : 50;
    p.n = 3;
    p.m_min = 2;
    p.m_max = 8;
    p.budget_spread = 4;
  } else {
    throw PreconditionError("unknown suite '" + suite + "'");
  }
  return p;
}

BenchResult run_bench(const std::string& suite, const std::vector<Instance>& instances,
                      SearchBudget budget, const std::string& repro_dir) {
  if (suite != "two-agent" && suite != "three-agent" && suite != "oracles") {
    throw PreconditionError("unknown suite '" + suite + "'");
  }
  BenchResult result;
  for (std::size_t id = 0; id < instances.size(); ++id) {
    const Instance& inst = instances[id];
    const std::vector<AgentId> agents = every_agent(inst);
    BenchRow row;
    row.instance_id = id;
    row.n = inst.num_agents();
    row.m = inst.num_goods();
    const auto start = std::chrono::steady_clock::now();
    try {
      if (suite == "two-agent") {
        row.algorithm = "efx2";
        const Allocation opt = max_nsw_allocation(inst, agents, inst.all_goods(), budget);
        const TwoAgentResult r = efx_2a(inst, {0, 1}, opt);
        const Certificate cert = certify_two_agent(inst, {0, 1}, opt, r);
        row.branch = to_string(r.trace.branch);
        row.product_alg = nsw_product(inst, r.allocation);
        row.product_opt = nsw_product(inst, opt);
        row.ratio_pass = Rational(2) * row.product_alg >= row.product_opt;
        row.efx_pass = is_efx(inst, r.allocation) ? "true" : "false";
        row.failures = cert.failures();
      } else if (suite == "three-agent") {
        row.algorithm = "efx3";
        const AlphaParams alpha;
        const ThreeAgentResult r = efx_3a(inst, alpha, budget);
        const Certificate cert = certify_three_agent(inst, alpha, r);
        row.branch = three_agent_branch(r);
        row.product_alg = nsw_product(inst, r.allocation);
        row.product_opt = r.opt_product;
        row.ratio_pass = row.product_alg >= three_agent_ratio() * row.product_opt;
        row.efx_pass = is_efx(inst, r.allocation) ? "true" : "false";
        row.failures = cert.failures();
      } else {
        row.algorithm = "oracle-nsw";
        row.branch = "pruned-vs-exhaustive";
        const Allocation pruned = max_nsw_allocation(inst, agents, inst.all_goods(), budget);
        const Allocation plain = max_nsw_allocation_exhaustive(inst, agents, inst.all_goods(), budget);
        row.product_alg = nsw_product(inst, pruned);
        row.product_opt = nsw_product(inst, plain);
        row.ratio_pass = pruned == plain;
        row.efx_pass = "na";
        if (!row.ratio_pass) row.failures = "pruned-differs";
      }
    } catch (const SearchBudgetExhausted& e) {
      row.cap_hit = true;
      row.failures = std::string("cap: ") + e.what();
    } catch (const std::exception& e) {
      row.failures = std::string("error: ") + e.what();
    }
    row.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    result.total_millis += row.millis;

    if (row.cap_hit) {
      ++result.cap_hits;
    } else {
      if (row.product_opt.is_positive()) {
        const Rational ratio = row.product_alg / row.product_opt;
        if (!result.min_ratio || ratio < *result.min_ratio) result.min_ratio = ratio;
      }
      const bool violated = !row.failures.empty() || !row.ratio_pass || row.efx_pass == "false";
      if (violated) {
        ++result.violations;
        if (!repro_dir.empty()) {
          const Json repro = {{"suite", suite},
                              {"instance_id", id},
                              {"failures", row.failures},
                              {"instance", instance_to_json(inst)}};
          const auto path = std::filesystem::path(repro_dir) /
                            ("bench-repro-" + suite + "-" + std::to_string(id) + ".json");
          write_text_file(path, repro.dump(2) + "\n");
        }
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string bench_csv(const std::string& suite, const BenchResult& result) {
  std::ostringstream out;
  out << "instance_id,n,m,algorithm,branch,product_alg,product_opt,ratio_pass,efx_pass,millis\n";
  bool all_ratio = true;
  bool all_efx = true;
  std::string algorithm;
  for (const auto& r : result.rows) {
    out << r.instance_id << ',' << r.n << ',' << r.m << ',' << r.algorithm << ',' << r.branch << ','
        << r.product_alg.str() << ',' << r.product_opt.str() << ','
        << (r.ratio_pass ? "true" : "false") << ',' << r.efx_pass << ',' << r.millis << '\n';
    all_ratio = all_ratio && r.ratio_pass;
    all_efx = all_efx && r.efx_pass != "false";
    algorithm = r.algorithm;
  }
  out << "summary," << result.rows.size() << ",," << suite << ",violations=" << result.violations
      << ",min_ratio=" << (result.min_ratio ? result.min_ratio->str() : "na")
      << ",cap_hits=" << result.cap_hits << ',' << (all_ratio ? "true" : "false") << ','
      << (all_efx ? "true" : "false") << ',' << result.total_millis << '\n';
  return out.str();
}

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  SolveOutcome outcome;
  try {
    const Instance instance = load_instance(options.instance_path);
    std::optional<Allocation> seed;
    if (options.seed_allocation == "file") {
      if (options.seed_file.empty()) throw PreconditionError("--seed-allocation file needs --seed-file");
      seed = allocation_from_json(load_json(options.seed_file), instance);
    } else if (options.seed_allocation != "opt") {
      throw PreconditionError("--seed-allocation must be opt or file");
    }
    outcome = solve(instance, options, seed);
  } catch (const SearchBudgetExhausted& e) {
    err << "search cap exhausted: " << e.what() << '\n';
    return kExitCap;
  } catch (const InvariantViolation& e) {
    err << "guarantee violation: " << e.what() << '\n';
    outcome = {Json{{"algorithm", options.algorithm}, {"error", e.what()}, {"ok", false}},
               kExitGuarantee};
  } catch (const ExistenceViolation& e) {
    err << "guarantee violation: " << e.what() << '\n';
    outcome = {Json{{"algorithm", options.algorithm}, {"error", e.what()}, {"ok", false}},
               kExitGuarantee};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    emit(options.out, outcome.report.dump(2) + "\n", out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (outcome.exit_code == kExitGuarantee) err << "one or more guarantee checks failed\n";
  return outcome.exit_code;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  Json report;
  try {
    const Instance instance = load_instance(options.instance_path);
    const Allocation allocation =
        allocation_from_json(load_json(options.allocation_path), instance);
    report = verify_report(instance, allocation, resolve_cap(options.cap));
    emit(options.out, report.dump(2) + "\n", out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const bool efx = report["efx"].get<bool>();
  const bool feasible = report["budget_feasible"].get<bool>();
  if (efx && feasible) return kExitOk;
  if (!efx) err << efx_witness_text(report) << '\n';
  if (!feasible) err << "allocation is not budget-feasible\n";
  return kExitVerifyFailed;
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  BenchResult result;
  try {
    const SearchBudget budget = resolve_cap(options.cap);
    const std::vector<Instance> instances =
        options.corpus.empty() ? gen_instances(suite_params(options.suite, options.seed, options.count))
                               : corpus_from_json(load_json(options.corpus));
    if (!options.repro_dir.empty()) std::filesystem::create_directories(options.repro_dir);
    result = run_bench(options.suite, instances, budget, options.repro_dir);
    emit(options.out, bench_csv(options.suite, result), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (result.violations > 0) {
    err << result.violations << " instance(s) violated a guarantee; repro files in "
        << options.repro_dir << '\n';
    return kExitGuarantee;
  }
  if (result.cap_hits > 0) {
    err << result.cap_hits << " instance(s) hit the search cap\n";
    return kExitCap;
  }
  return kExitOk;
}

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<Instance> instances = gen_instances(options.params);
    if (!options.out_dir.empty()) {
      std::filesystem::create_directories(options.out_dir);
      for (std::size_t k = 0; k < instances.size(); ++k) {
        write_text_file(std::filesystem::path(options.out_dir) /
                            ("instance_" + std::to_string(k) + ".json"),
                        serialize_instance(instances[k]));
      }
    }
    if (!options.out.empty() || options.out_dir.empty()) {
      emit(options.out, corpus_to_json(instances).dump(2) + "\n", out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Budget-feasible EFx allocations with Nash welfare guarantees"};
  app.require_subcommand(1);

  SolveOptions solve_opts;
  std::optional<std::uint64_t> solve_cap;
  auto* solve_cmd = app.add_subcommand("solve", "Run an algorithm and write a JSON report");
  solve_cmd->add_option("instance", solve_opts.instance_path, "Instance JSON file")->required();
  solve_cmd->add_option("--algorithm", solve_opts.algorithm, "efx2, efx3, oracle-nsw or oracle-efx")
      ->check(CLI::IsMember({"efx2", "efx3", "oracle-nsw", "oracle-efx"}));
  solve_cmd->add_option("--alpha", solve_opts.alpha, "Monopoly threshold for efx3, as p/q");
  solve_cmd->add_flag("--experimental-alpha", solve_opts.experimental_alpha,
                      "Allow alpha above 1/35 (guarantees no longer apply)");
  solve_cmd->add_option("--seed-allocation", solve_opts.seed_allocation, "opt or file")
      ->check(CLI::IsMember({"opt", "file"}));
  solve_cmd->add_option("--seed-file", solve_opts.seed_file, "Seed allocation JSON for efx2");
  solve_cmd->add_option("--cap", solve_cap, "Search node cap");
  solve_cmd->add_option("--out", solve_opts.out, "Report path (default stdout)");

  VerifyOptions verify_opts;
  std::optional<std::uint64_t> verify_cap;
  auto* verify_cmd = app.add_subcommand("verify", "Check an allocation's fairness properties");
  verify_cmd->add_option("instance", verify_opts.instance_path, "Instance JSON file")->required();
  verify_cmd->add_option("allocation", verify_opts.allocation_path,
                         "Allocation JSON or solve report")
      ->required();
  verify_cmd->add_option("--cap", verify_cap, "Search node cap for the Pareto check");
  verify_cmd->add_option("--out", verify_opts.out, "Report path (default stdout)");

  BenchOptions bench_opts;
  std::optional<std::uint64_t> bench_cap;
  auto* bench_cmd = app.add_subcommand("bench", "Run a guarantee suite and write CSV rows");
  bench_cmd->add_option("--suite", bench_opts.suite, "two-agent, three-agent or oracles")
      ->check(CLI::IsMember({"two-agent", "three-agent", "oracles"}));
  bench_cmd->add_option("--seed", bench_opts.seed, "Generator seed");
  bench_cmd->add_option("--count", bench_opts.count, "Instances to generate (0: suite default)");
  bench_cmd->add_option("--corpus", bench_opts.corpus, "Run on a corpus file instead");
  bench_cmd->add_option("--out", bench_opts.out, "CSV path (default stdout)");
  bench_cmd->add_option("--repro-dir", bench_opts.repro_dir, "Where violating instances go");
  bench_cmd->add_option("--cap", bench_cap, "Search node cap");

  GenOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("gen", "Generate random instances");
  GenParams& gp = gen_opts.params;
  gen_cmd->add_option("--seed", gp.seed, "Generator seed");
  gen_cmd->add_option("--count", gp.count, "Number of instances");
  gen_cmd->add_option("-n,--agents", gp.n, "Agents per instance");
  gen_cmd->add_option("--m-min", gp.m_min, "Fewest goods");
  gen_cmd->add_option("--m-max", gp.m_max, "Most goods");
  gen_cmd->add_option("--cost-min", gp.cost_min, "Smallest cost");
  gen_cmd->add_option("--cost-max", gp.cost_max, "Largest cost");
  gen_cmd->add_option("--value-min", gp.value_min, "Smallest value");
  gen_cmd->add_option("--value-max", gp.value_max, "Largest value");
  gen_cmd->add_option("--budget-spread", gp.budget_spread, "Richest over poorest budget");
  gen_cmd->add_option("--base-budget-min", gp.base_budget_min, "Smallest base budget");
  gen_cmd->add_option("--base-budget-max", gp.base_budget_max, "Largest base budget");
  gen_cmd->add_option("--zero-prob", gp.zero_probability, "Chance a value is forced to zero");
  gen_cmd->add_option("--out", gen_opts.out, "Corpus path (default stdout)");
  gen_cmd->add_option("--out-dir", gen_opts.out_dir, "Also write one file per instance here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*solve_cmd) {
    solve_opts.cap = solve_cap;
    return cmd_solve(solve_opts, out, err);
  }
  if (*verify_cmd) {
    verify_opts.cap = verify_cap;
    return cmd_verify(verify_opts, out, err);
  }
  if (*bench_cmd) {
    bench_opts.cap = bench_cap;
    return cmd_bench(bench_opts, out, err);
  }
  return cmd_gen(gen_opts, out, err);
}

}  // namespace budgeted_efx
