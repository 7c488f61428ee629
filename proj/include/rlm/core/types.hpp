#ifndef RLM_CORE_TYPES_HPP_
#define RLM_CORE_TYPES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlm/errors.hpp"

namespace rlm {

/// Whether a step ends a reasoning sequence (eos) or an intermediate step (eois).
enum class StepMarker { kIntermediate, kFinal };

struct ReasoningStep {
  std::string text;
  StepMarker marker = StepMarker::kIntermediate;

  bool operator==(const ReasoningStep&) const = default;
};

/// A reasoning state: the query followed by the steps appended so far.
/// Immutable value type; append() returns a new state.
class State {
 public:
  explicit State(ReasoningStep query);
  static State from_steps(std::vector<ReasoningStep> steps);

  State append(ReasoningStep step) const;

  const std::vector<ReasoningStep>& steps() const { return steps_; }
  const ReasoningStep& query() const { return steps_.front(); }
  const ReasoningStep& last() const { return steps_.back(); }
  bool terminal() const { return steps_.back().marker == StepMarker::kFinal; }
  /// Steps appended after the query.
  std::size_t depth() const { return steps_.size() - 1; }

  bool operator==(const State&) const = default;

 private:
  State() = default;
  std::vector<ReasoningStep> steps_;
};

State state_append(const State& s, ReasoningStep z);

using NodeId = std::uint32_t;

/// Per-node search statistics. q estimates the value of the transition
/// leading into the node and stays within [-1, 1].
struct NodeStats {
  std::uint32_t visits = 0;
  double q = 0.0;
  bool terminal = false;
  std::optional<double> reward;  // set on terminal nodes in training mode
};

enum class SearchMode { kInference, kTraining };

struct SearchConfig {
  int iterations = 32;
  int children_per_expansion = 3;
  double c1 = 1.25;
  double c2 = 19652.0;
  double backprop_weight = 0.5;  // alpha
  double discount = 1.0;         // gamma
  SearchMode mode = SearchMode::kInference;
  int max_depth = 32;
  std::uint64_t seed = 0;
  bool extend_until_terminal = false;

  void validate() const;
};

struct Trajectory {
  std::vector<State> states;
  bool terminal = false;
  std::optional<double> terminal_reward;
};

}  // namespace rlm

#endif  // RLM_CORE_TYPES_HPP_
