#pragma once

#include <stdexcept>
#include <string>

namespace gsynth {

/// Base class for all gsynth errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  int line;
  int col;
  ParseError(const std::string &msg, int line_, int col_)
      : Error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), col(col_) {}
};

struct UnsupportedFeature : Error {
  using Error::Error;
};

struct UnsupportedLogic : Error {
  using Error::Error;
};

struct NotInvariantProblem : Error {
  using Error::Error;
};

struct SortMismatch : Error {
  using Error::Error;
};

struct UnboundVariable : Error {
  using Error::Error;
};

struct UnsupportedOperator : Error {
  using Error::Error;
};

struct ArityMismatch : Error {
  using Error::Error;
};

struct NotInLanguage : Error {
  using Error::Error;
};

struct DegenerateDistribution : Error {
  using Error::Error;
};

struct EmptySupport : Error {
  using Error::Error;
};

struct DiscardedHelper : Error {
  using Error::Error;
};

// Search exit conditions. Thrown by the enumerators, turned into
// SolveResult outcomes by the CEGIS driver.
struct BudgetExhausted : Error {
  using Error::Error;
};

struct Exhausted : Error {
  using Error::Error;
};

struct TimedOut : Error {
  using Error::Error;
};

// Verifier process failures.
struct SolverCrashed : Error {
  using Error::Error;
};

struct ProtocolError : Error {
  using Error::Error;
};

// LLM backend failures.
struct MissingContext : Error {
  using Error::Error;
};

struct NoProgramFound : Error {
  using Error::Error;
};

struct IncompleteFunction : Error {
  using Error::Error;
};

struct ScriptExhausted : Error {
  using Error::Error;
};

struct BackendUnavailable : Error {
  using Error::Error;
};

struct RateLimited : Error {
  using Error::Error;
};

} // namespace gsynth
