#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scnp {

enum class ErrorKind {
  kNotATree,
  kProbabilityOutOfRange,
  kNonpositiveAttackCost,
  kNegativeConnectionCost,
  kNegativeBudget,
  kParseError,
  kTooManyAttackedNodes,
  kInstanceTooLarge,
  kUnequalProbabilities,
  kNonUnitCosts,
  kStateOverflow,
  kNumericalFailure,
  kMasterInfeasible,
  kInvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Base class for every error raised by the library. The kind is stable and
// meant for programmatic dispatch; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotATree: return "NotATree";
    case ErrorKind::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorKind::kNonpositiveAttackCost: return "NonpositiveAttackCost";
    case ErrorKind::kNegativeConnectionCost: return "NegativeConnectionCost";
    case ErrorKind::kNegativeBudget: return "NegativeBudget";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kTooManyAttackedNodes: return "TooManyAttackedNodes";
    case ErrorKind::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::kUnequalProbabilities: return "UnequalProbabilities";
    case ErrorKind::kNonUnitCosts: return "NonUnitCosts";
    case ErrorKind::kStateOverflow: return "StateOverflow";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kMasterInfeasible: return "MasterInfeasible";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace scnp
