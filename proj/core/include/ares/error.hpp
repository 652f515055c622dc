#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ares {

enum class ErrorCode {
  InvalidTargetDim,
  EmptyDomain,
  NonFiniteInput,
  SingularSystem,
  DimensionMismatch,
  DomainMismatch,
  InvalidDomain,
  NonFiniteScalar,
  EmptyCombination,
  CovarianceShapeMismatch,
  InvalidCovariance,
  UnsupportedFormat,
  CorruptArchive,
  DivisionByZero,
  IoError,
  NegativeInput,
  ParseError,
  UnknownId,
  InvalidArgument,
};

// Stable identifier printed by the CLI and written into failed report rows.
std::string_view error_name(ErrorCode code) noexcept;

// Process exit status for a failure of this kind: 2 for data errors,
// 3 for numerical failures.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ares
