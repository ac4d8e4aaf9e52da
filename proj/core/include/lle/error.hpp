#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lle {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteResult,
  UnsupportedDirection,
  TrajectoryEscape,
  SingularDenominator,
  OutOfRange,
  NoDivergence,
  WindowTooShort,
  DegenerateGain,
  SingularSystem,
  AllIcsFailed,
  InsufficientData,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lle
