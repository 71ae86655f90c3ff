#pragma once

#include <stdexcept>
#include <string>

namespace budgeted_efx {

/// Unknown ids, mismatched lengths, negative quantities, overlapping bundles.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Some agent values her optimum bundle at zero, so valuations cannot be
/// normalized.
class DegenerateOptimumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive search hit its enumeration cap. Oracles never fall back to
/// an approximate answer.
class SearchBudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An object that must exist by theory was not found by exhaustive search.
class ExistenceViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant of a procedure failed at runtime.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace budgeted_efx
