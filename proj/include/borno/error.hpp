#pragma once

#include <stdexcept>
#include <string>

namespace borno {

enum class ErrorKind {
  DescriptorMismatch,
  NumericalFailure,
  InvariantViolation,
  CapExceeded,
  BudgetExceeded,
  Unsupported,
  Unbounded,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

/// Base error of the toolkit. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical failure carrying the best bracket known when the method gave up.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double lo, double hi)
      : Error(ErrorKind::NumericalFailure, what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

}  // namespace borno
