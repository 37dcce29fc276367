#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace packit {

enum class ErrorCode {
  InvalidDims,
  TurnMismatch,
  Overlap,
  Bounds,
  Area,
  Range,
  InvalidInput,
  Decode,
  Format,
  Size,
  Duplicate,
  Partition,
  Solver,
  Parse,
};

/// Stable machine-readable name, used verbatim as the ApiError code.
std::string_view code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace packit
