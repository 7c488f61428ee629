#ifndef RLM_ERRORS_HPP_
#define RLM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rlm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// core
struct AppendAfterFinal : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };
struct UnknownNode : Error { using Error::Error; };

// search
struct ExpandTerminal : Error { using Error::Error; };
struct ExpandNonLeaf : Error { using Error::Error; };
struct DepthExceeded : Error { using Error::Error; };
struct NoTerminalPath : Error { using Error::Error; };

// backends
struct BackendFailure : Error {
  BackendFailure(const std::string& msg, int attempts_, int last_status_)
      : Error(msg), attempts(attempts_), last_status(last_status_) {}
  int attempts = 0;
  int last_status = 0;
};
struct MalformedResponse : Error { using Error::Error; };
struct StateNotInEnv : Error { using Error::Error; };

// labeling
struct EmptyCompletion : Error { using Error::Error; };
struct NonTerminalTrace : Error { using Error::Error; };
struct MissingVerifierReward : Error { using Error::Error; };

// pipeline
struct MissingReward : Error { using Error::Error; };

// losses
struct NonPositiveRatio : Error { using Error::Error; };
struct PositiveLogProb : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };

// metrics
struct InvalidDistribution : Error { using Error::Error; };
struct OrderViolation : Error { using Error::Error; };
struct SizeExceedsQuestions : Error { using Error::Error; };

}  // namespace rlm

#endif  // RLM_ERRORS_HPP_
