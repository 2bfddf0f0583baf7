#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msgames {

// Bad input from a caller: malformed specs, illegal moves, mismatched boards.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside a function's mathematical domain (e.g. an empty universe).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A search hit its node or wall-clock cap. No verdict is implied.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scripted strategy produced an illegal or out-of-bound move.
struct ScriptDefect : std::logic_error {
  using std::logic_error::logic_error;
};

struct SyntaxError : UsageError {
  SyntaxError(const std::string& msg, std::size_t pos)
      : UsageError(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

}  // namespace msgames
