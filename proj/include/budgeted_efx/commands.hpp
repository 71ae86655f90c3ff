#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "budgeted_efx/gen.hpp"
#include "budgeted_efx/io.hpp"
#include "budgeted_efx/oracles.hpp"

namespace budgeted_efx {

/// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitGuarantee = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitVerifyFailed = 4;

/// --cap wins over BUDGETED_EFX_CAP, which wins over the library default.
SearchBudget resolve_cap(std::optional<std::uint64_t> flag);

/// Budget feasibility, EF, EF1 and EFx recomputed from the allocation, with
/// the first EFx and EF1 witnesses.
Json certificate_json(const Instance& instance, const Allocation& allocation);

struct SolveOptions {
  std::string instance_path;
  std::string algorithm = "efx3";
  std::string alpha = "1/35";
  bool experimental_alpha = false;
  std::string seed_allocation = "opt";
  std::string seed_file;
  std::optional<std::uint64_t> cap;
  std::string out;
};

struct SolveOutcome {
  Json report;
  int exit_code = kExitOk;
};

/// Runs one algorithm and builds its report; never writes files.
SolveOutcome solve(const Instance& instance, const SolveOptions& options,
                   const std::optional<Allocation>& seed);

struct VerifyOptions {
  std::string instance_path;
  std::string allocation_path;
  std::optional<std::uint64_t> cap;
  std::string out;
};

/// Certificate plus Pareto checks (null when the search cap is hit).
Json verify_report(const Instance& instance, const Allocation& allocation, SearchBudget budget);

struct BenchOptions {
  std::string suite = "two-agent";
  std::uint64_t seed = 1;
  std::size_t count = 0;  // 0: suite default
  std::string corpus;     // use this corpus instead of generating
  std::string out;
  std::string repro_dir = ".";
  std::optional<std::uint64_t> cap;
};

struct BenchRow {
  std::size_t instance_id = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string algorithm;
  std::string branch;
  Rational product_alg;
  Rational product_opt;
  bool ratio_pass = false;
  std::string efx_pass;  // "true", "false" or "na"
  double millis = 0;
  /// Failed certificate checks, empty when everything held.
  std::string failures;
  bool cap_hit = false;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::size_t violations = 0;
  std::size_t cap_hits = 0;
  /// Smallest product_alg / product_opt over rows with a positive optimum.
  std::optional<Rational> min_ratio;
  double total_millis = 0;
};

/// Generator settings each suite uses when no corpus is given.
GenParams suite_params(const std::string& suite, std::uint64_t seed, std::size_t count);

/// Runs a suite over the given instances. Violating instances are written
/// as repro files into `repro_dir` when it is nonempty.
BenchResult run_bench(const std::string& suite, const std::vector<Instance>& instances,
                      SearchBudget budget, const std::string& repro_dir);

std::string bench_csv(const std::string& suite, const BenchResult& result);

struct GenOptions {
  GenParams params;
  std::string out;
  std::string out_dir;
};

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);
int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace budgeted_efx
