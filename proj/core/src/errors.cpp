#include "ioc/errors.hpp"

namespace ioc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidSystem: return "InvalidSystem";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kAsymmetricInput: return "AsymmetricInput";
    case ErrorCode::kInvalidCost: return "InvalidCost";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kSizeGuardExceeded: return "SizeGuardExceeded";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kHypothesisUnmet: return "HypothesisUnmet";
    case ErrorCode::kSolverNotConverged: return "SolverNotConverged";
    case ErrorCode::kNotIdentifiable: return "NotIdentifiable";
    case ErrorCode::kPsdViolation: return "PsdViolation";
    case ErrorCode::kResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::kAmbiguousSolution: return "AmbiguousSolution";
    case ErrorCode::kRejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(SystemDefect defect) {
  switch (defect) {
    case SystemDefect::kNotInvertible: return "not_invertible";
    case SystemDefect::kRankDeficientB: return "rank_deficient_B";
    case SystemDefect::kUncontrollable: return "uncontrollable";
  }
  return "unknown";
}

}  // namespace ioc
