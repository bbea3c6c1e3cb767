#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixroute {

enum class ErrorCode {
  kInvalidNetwork,
  kNoPathExists,
  kDimensionMismatch,
  kInfeasibleFlow,
  kZeroFlow,
  kDegenerateCost,
  kNotPairwiseSeparable,
  kDegenerateBlock,
  kUnequalBlockRows,
  kSplitMismatch,
  kQNotBlockDiagonal,
  kQNonPositiveBlock,
  kPNotPositiveDefinite,
  kZeroOptimalCost,
  kBracketFailure,
  kNonMonotoneScaling,
  kSupportBudgetExceeded,
  kUnknownFixture,
  kParseError,
  kValidationError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` is stable
// and tests match on it rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixroute
