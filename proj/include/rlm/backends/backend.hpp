#ifndef RLM_BACKENDS_BACKEND_HPP_
#define RLM_BACKENDS_BACKEND_HPP_

#include <string>
#include <vector>

#include "rlm/core/types.hpp"

namespace rlm {

struct DiversityParams {
  double temperature = 1.0;  // 0 => deterministic top-m
  bool distinct = true;
};

/// Generates candidate next steps for a state. Implementations must accept
/// concurrent calls and be deterministic under a fixed backend seed.
class PolicyBackend {
 public:
  virtual ~PolicyBackend() = default;

  /// Up to m candidate steps, each extending the given state by one step.
  virtual std::vector<ReasoningStep> generate(const State& state, int m,
                                              const DiversityParams& params) = 0;

  /// Positionally aligned per-state candidates; overridden by wire-level
  /// backends that support multi-state requests.
  virtual std::vector<std::vector<ReasoningStep>> generate_batch(
      const std::vector<State>& states, int m, const DiversityParams& params);
};

/// Scores a batch of states with q-values in [-1, 1], positionally aligned.
class ValueBackend {
 public:
  virtual ~ValueBackend() = default;
  virtual std::vector<double> score(const std::vector<State>& states) = 0;
};

/// Binary correctness check of a terminal state against the golden answer.
class Verifier {
 public:
  virtual ~Verifier() = default;
  virtual bool check(const State& terminal_state, const std::string& golden) const = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  int initial_backoff_ms = 50;
  double backoff_multiplier = 2.0;
};

}  // namespace rlm

#endif  // RLM_BACKENDS_BACKEND_HPP_
