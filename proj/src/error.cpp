#include "uzawa/error.hpp"

namespace uzawa {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::DegenerateElement: return "DegenerateElement";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidMeshRatio: return "InvalidMeshRatio";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::TooManyConstraints: return "TooManyConstraints";
    case ErrorCode::NoFeasibleSubset: return "NoFeasibleSubset";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(error_name(code)) + ": " + what),
      code_(code),
      index_(index) {}

}  // namespace uzawa
