#include "lnnreg/error.hpp"

namespace lnnreg {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::ZeroNoise: return "ZeroNoise";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::SingularL: return "SingularL";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::DeltaTooSmall: return "DeltaTooSmall";
    case ErrorCode::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NeverTriggered: return "NeverTriggered";
    case ErrorCode::DegenerateThreshold: return "DegenerateThreshold";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

Error::Error(ErrorCode code, const std::string& what, std::size_t row)
    : std::runtime_error(std::string(error_name(code)) + ": row " + std::to_string(row) +
                         ": " + what),
      code_(code),
      row_(row) {}

Error Error::with_row(std::size_t row) const {
  // Strip the "<Name>: " prefix so the row tag is not nested.
  std::string msg = what();
  const auto prefix = std::string(error_name(code_)) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  return Error(code_, msg, row);
}

}  // namespace lnnreg
