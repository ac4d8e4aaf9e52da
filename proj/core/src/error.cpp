#include "lle/error.hpp"

namespace lle {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteResult: return "NonFiniteResult";
    case ErrorCode::UnsupportedDirection: return "UnsupportedDirection";
    case ErrorCode::TrajectoryEscape: return "TrajectoryEscape";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoDivergence: return "NoDivergence";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::DegenerateGain: return "DegenerateGain";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::AllIcsFailed: return "AllIcsFailed";
    case ErrorCode::InsufficientData: return "InsufficientData";
  }
  return "Unknown";
}

}  // namespace lle
