#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace covdlm {

enum class ErrorKind {
  NonFiniteInput,
  NotPositiveDefinite,
  Singular,
  NotSymmetric,
  DimensionMismatch,
  InvalidArgument,
  InvalidDimension,
  InvalidDiscount,
  InvalidScale,
  UnsupportedHorizon,
  TimeVaryingDesign,
  DivisionByZero,
  ParseError,
  InsufficientData,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it onto a machine-readable error report.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace covdlm
