#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uzawa {

enum class ErrorCode {
  DimensionMismatch,
  NotPositiveDefinite,
  NoConvergence,
  ZeroMatrix,
  DegenerateElement,
  InvalidSpec,
  InvalidMeshRatio,
  InvalidConfig,
  TooManyConstraints,
  NoFeasibleSubset,
  ParseError,
  IoError,
};

std::string_view error_name(ErrorCode code);

// Single exception type for the library; the code identifies the failure and
// `index` carries the offending pivot / iteration count / element where one
// exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace uzawa
