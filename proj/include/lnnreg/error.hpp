#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lnnreg {

enum class ErrorCode {
  DimMismatch,
  NonFinite,
  InvalidArgument,
  ZeroMatrix,
  BadAlpha,
  BadEpsilon,
  BadExponent,
  ZeroNoise,
  NotSymmetric,
  NotPsd,
  SingularL,
  SingularShift,
  DeltaTooSmall,
  DeltaTooLarge,
  NoSignChange,
  NoConvergence,
  NeverTriggered,
  DegenerateThreshold,
  DivergenceDetected,
  ParseError,
  InternalError,
};

// Stable name of an error code; the CLI prints it verbatim.
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  Error(ErrorCode code, const std::string& what, std::size_t row);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  // Index of the system row (weight-matrix row) that failed, when known.
  std::optional<std::size_t> row() const noexcept { return row_; }

  Error with_row(std::size_t row) const;

 private:
  ErrorCode code_;
  std::optional<std::size_t> row_;
};

}  // namespace lnnreg
