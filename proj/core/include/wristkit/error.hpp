#pragma once

#include <stdexcept>
#include <string>

namespace wristkit {

enum class ErrorCode {
  DegenerateInput,
  NonUnitAxis,
  DimensionMismatch,
  NotParallelWrist,
  ClosureFailure,
  Infeasible,
  MaxIterations,
  GridMismatch,
  NonPositiveInput,
  UnstableSimulation,
  ParseError,
  MonotonicityViolation,
  EmptySelection,
  InvalidModel,
  IoError,
};

const char* errorCodeName(ErrorCode code);

/// Domain error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wristkit
