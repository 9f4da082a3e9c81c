#pragma once

#include <stdexcept>
#include <string>

namespace semipb {

enum class ErrorCode {
  SpaceMismatch,
  LabelMismatch,
  NotInAlgebra,
  NotMeasurable,
  NotSubalgebra,
  Infeasible,
  NotPositive,
  NotNormalized,
  ConstantsMissing,
  NotSurjective,
  NotMeasurePreserving,
  PipelineInfeasible,
  ReservedIdCollision,
  ParamError,
  InvalidArgument,
  Parse,
  Schema,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace semipb
