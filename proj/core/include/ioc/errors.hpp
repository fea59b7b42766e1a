#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ioc {

enum class ErrorCode {
  kParseError,
  kInvalidSystem,
  kDimensionMismatch,
  kAsymmetricInput,
  kInvalidCost,
  kNumericalFailure,
  kSizeGuardExceeded,
  kSingularSystem,
  kHypothesisUnmet,
  kSolverNotConverged,
  kNotIdentifiable,
  kPsdViolation,
  kResidualTooLarge,
  kAmbiguousSolution,
  kRejectionBudgetExceeded,
  kInvalidArgument,
  kIoError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is stable
/// and is what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class SystemDefect { kNotInvertible, kRankDeficientB, kUncontrollable };

std::string_view to_string(SystemDefect defect);

class InvalidSystemError : public Error {
 public:
  InvalidSystemError(SystemDefect defect, const std::string& message)
      : Error(ErrorCode::kInvalidSystem,
              std::string(to_string(defect)) + ": " + message),
        defect_(defect) {}

  SystemDefect defect() const noexcept { return defect_; }

 private:
  SystemDefect defect_;
};

}  // namespace ioc
