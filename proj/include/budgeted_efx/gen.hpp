#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "budgeted_efx/model.hpp"

namespace budgeted_efx {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random integer instances. Budgets run from a base budget up to
/// base * budget_spread: the cheapest agent gets the base, the richest the
/// top, and any others a uniform integer in between.
struct GenParams {
  std::uint64_t seed = 1;
  std::size_t count = 1;
  std::size_t n = 2;
  std::size_t m_min = 4;
  std::size_t m_max = 8;
  std::int64_t cost_min = 1;
  std::int64_t cost_max = 10;
  std::int64_t value_min = 0;
  std::int64_t value_max = 20;
  std::int64_t budget_spread = 10;
  /// Chance that a single value is forced to zero, for sparse interests.
  double zero_probability = 0.0;
  /// Base budget range; zero means cost_max for both ends.
  std::int64_t base_budget_min = 0;
  std::int64_t base_budget_max = 0;
  std::size_t max_retries = 1000;
};

/// Deterministic in the parameters. Every instance has a positive optimum
/// NSW product; throws GenerationError if resampling keeps failing.
std::vector<Instance> gen_instances(const GenParams& params);

}  // namespace budgeted_efx
