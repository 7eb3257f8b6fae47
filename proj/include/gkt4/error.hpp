#pragma once

#include <stdexcept>
#include <string>

namespace gkt4 {

enum class ErrorCode {
  InvalidArgument,
  NonPositiveMetric,
  SingularForm,
  BrokenStructure,
  DegeneratePair,
  PositivityLoss,
  IoFailure,
  FormatMismatch,
  DimsMismatch,
  ConfigError,
  Precondition,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by integrators when the metric margin drops to the stop threshold.
class PositivityLossError : public Error {
 public:
  PositivityLossError(double reached_time, double margin, const std::string& what)
      : Error(ErrorCode::PositivityLoss, what), reached_time_(reached_time), margin_(margin) {}
  double reached_time() const { return reached_time_; }
  double margin() const { return margin_; }

 private:
  double reached_time_;
  double margin_;
};

}  // namespace gkt4
