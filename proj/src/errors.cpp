#include "covdlm/errors.hpp"

namespace covdlm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::InvalidDiscount: return "InvalidDiscount";
    case ErrorKind::InvalidScale: return "InvalidScale";
    case ErrorKind::UnsupportedHorizon: return "UnsupportedHorizon";
    case ErrorKind::TimeVaryingDesign: return "TimeVaryingDesign";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace covdlm
