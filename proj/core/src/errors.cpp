#include "mixroute/errors.hpp"

namespace mixroute {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidNetwork: return "InvalidNetwork";
    case ErrorCode::kNoPathExists: return "NoPathExists";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInfeasibleFlow: return "InfeasibleFlow";
    case ErrorCode::kZeroFlow: return "ZeroFlow";
    case ErrorCode::kDegenerateCost: return "DegenerateCost";
    case ErrorCode::kNotPairwiseSeparable: return "NotPairwiseSeparable";
    case ErrorCode::kDegenerateBlock: return "DegenerateBlock";
    case ErrorCode::kUnequalBlockRows: return "UnequalBlockRows";
    case ErrorCode::kSplitMismatch: return "SplitMismatch";
    case ErrorCode::kQNotBlockDiagonal: return "QNotBlockDiagonal";
    case ErrorCode::kQNonPositiveBlock: return "QNonPositiveBlock";
    case ErrorCode::kPNotPositiveDefinite: return "PNotPositiveDefinite";
    case ErrorCode::kZeroOptimalCost: return "ZeroOptimalCost";
    case ErrorCode::kBracketFailure: return "BracketFailure";
    case ErrorCode::kNonMonotoneScaling: return "NonMonotoneScaling";
    case ErrorCode::kSupportBudgetExceeded: return "SupportBudgetExceeded";
    case ErrorCode::kUnknownFixture: return "UnknownFixture";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

}  // namespace mixroute
