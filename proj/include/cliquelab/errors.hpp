#pragma once

#include <stdexcept>
#include <string>

namespace cliquelab {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Iterative method did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// solve_scalar was given an interval without a sign change.
class NoSignChangeError : public Error {
 public:
  using Error::Error;
};

// A function returned NaN or an infinity during root finding or quadrature.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// P(W <= cutoff) == 0, so truncated moments are undefined.
class ZeroMassError : public Error {
 public:
  using Error::Error;
};

// s_n / E[W~] <= 1: the fixed-point equation has no admissible base.
class DegenerateBaseError : public Error {
 public:
  using Error::Error;
};

// An asymptotic closed form was evaluated outside the region where it holds.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Exact max-clique search exceeded its node budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// Input too large for an exact enumeration routine.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration (JSON or flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cliquelab
