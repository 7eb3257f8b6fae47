#include "gkt4/error.hpp"

namespace gkt4 {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveMetric: return "NonPositiveMetric";
    case ErrorCode::SingularForm: return "SingularForm";
    case ErrorCode::BrokenStructure: return "BrokenStructure";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::PositivityLoss: return "PositivityLoss";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::FormatMismatch: return "FormatMismatch";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Precondition: return "Precondition";
  }
  return "Unknown";
}

}  // namespace gkt4
