#include "ares/error.hpp"

namespace ares {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidTargetDim: return "InvalidTargetDim";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::NonFiniteScalar: return "NonFiniteScalar";
    case ErrorCode::EmptyCombination: return "EmptyCombination";
    case ErrorCode::CovarianceShapeMismatch: return "CovarianceShapeMismatch";
    case ErrorCode::InvalidCovariance: return "InvalidCovariance";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptArchive: return "CorruptArchive";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularSystem:
    case ErrorCode::InvalidCovariance:
    case ErrorCode::DivisionByZero:
      return 3;
    default:
      return 2;
  }
}

}  // namespace ares
