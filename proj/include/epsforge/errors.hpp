#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epsforge {

// Parse failure with 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

// Operation asked of a solving substitution (selection, step).
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Step budget exhausted before a solution was found.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A guarded recursion attempted a non-descending call.
class DescentViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Range or precondition violation in series analysis.
class SeriesError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Certificate requested for a trace that never solved.
class NotTerminated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bound engine result disagrees with direct iteration.
class SolutionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordinal notation exceeded its configured representation limits.
class OrdinalOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic on numerals left the representable range.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace epsforge
