#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctrlcap {

// Every failure raised by the library carries one of these kinds so callers
// (and the CLI's error JSON) can branch on it without parsing messages.
enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NotHermitian,
  NoConvergence,
  Singular,
  Overflow,
  Unresolved,
  Defective,
  InfeasibleSpec,
  Unreachable,
  DegenerateRegion,
  OptimizationStalled,
  HypothesisViolated,
  DeskScaleExceeded,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace ctrlcap
