#include "hypcone/error.hpp"

namespace hypcone {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kNonHyperbolic: return "NonHyperbolic";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kIdentificationAmbiguity: return "IdentificationAmbiguity";
    case ErrorCode::kMemoryCap: return "MemoryCap";
    case ErrorCode::kDepthExceedsBall: return "DepthExceedsBall";
    case ErrorCode::kNotStabilized: return "NotStabilized";
    case ErrorCode::kNonDeterministic: return "NonDeterministic";
    case ErrorCode::kMultipleTerminalSCCs: return "MultipleTerminalSCCs";
    case ErrorCode::kNotPrimitive: return "NotPrimitive";
    case ErrorCode::kInvalidRoot: return "InvalidRoot";
    case ErrorCode::kDiverged: return "Diverged";
    case ErrorCode::kFoldNewtonFailed: return "FoldNewtonFailed";
    case ErrorCode::kZeroPredecessor: return "ZeroPredecessor";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kZeroResultant: return "ZeroResultant";
    case ErrorCode::kNoMatchingCandidate: return "NoMatchingCandidate";
    case ErrorCode::kHorizonExceedsBall: return "HorizonExceedsBall";
    case ErrorCode::kSchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace hypcone
