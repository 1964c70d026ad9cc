#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypcone {

enum class ErrorCode {
  kInvalidParameter,
  kNonHyperbolic,
  kCapExceeded,
  kIdentificationAmbiguity,
  kMemoryCap,
  kDepthExceedsBall,
  kNotStabilized,
  kNonDeterministic,
  kMultipleTerminalSCCs,
  kNotPrimitive,
  kInvalidRoot,
  kDiverged,
  kFoldNewtonFailed,
  kZeroPredecessor,
  kNotConverged,
  kInfeasible,
  kZeroResultant,
  kNoMatchingCandidate,
  kHorizonExceedsBall,
  kSchemaError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; `code()` identifies
// the failure kind so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hypcone
