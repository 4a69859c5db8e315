#pragma once

#include <stdexcept>
#include <string>

namespace fermatq {

/// Caller supplied an argument outside an operation's precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured memory cap or operation budget would be exceeded.
/// Raised before any work is done, so no partial results exist.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (a bug, not bad input).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fermatq
