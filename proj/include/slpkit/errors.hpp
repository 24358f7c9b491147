#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace slpkit {

// Raised by parse() for malformed text. line() is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Violation {
  std::size_t position;  // 1-based instruction position
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// An intermediate value (or expansion) outgrew the caller's EvalBudget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t gate, const std::string& what)
      : std::runtime_error("budget exceeded at gate " + std::to_string(gate) + ": " + what),
        gate_(gate) {}
  std::size_t gate() const noexcept { return gate_; }

 private:
  std::size_t gate_;
};

class PrecisionViolation : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FactorizationTimeout : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The bounded witness search ran out of shifts without a verdict. This is
// "inconclusive", never "no".
class GapBoundExhausted : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class MalformedWitness : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slpkit
