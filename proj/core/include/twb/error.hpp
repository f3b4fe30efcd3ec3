#pragma once

#include <stdexcept>
#include <string>

namespace twb {

enum class ErrorKind {
  NotASuccessor,
  UnknownIndex,
  InvalidTree,
  CannotComplete,
  NotClosed,
  SortError,
  Incomparable,
  BudgetExceeded,
  WrongShape,
  BadSeries,
  RankTooLow,
  NotAlmostIncreasing,
  ShapeExhausted,
  DisjointnessViolated,
  AxiomViolated,
  InsufficientSubwitness,
  InputError,
};

const char* error_kind_name(ErrorKind k);

/// Single exception type for the library; `kind()` tells callers which contract failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind), message_(what) {}
  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace twb
