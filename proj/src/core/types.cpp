#include "rlm/core/types.hpp"

#include <utility>

namespace rlm {

namespace {

void check_step(const ReasoningStep& step) {
  if (step.text.empty()) throw InvalidState("reasoning step text must be non-empty");
}

}  // namespace

State::State(ReasoningStep query) {
  check_step(query);
  if (query.marker == StepMarker::kFinal) {
    throw InvalidState("the query step cannot be final");
  }
  steps_.push_back(std::move(query));
}

State State::from_steps(std::vector<ReasoningStep> steps) {
  if (steps.empty()) throw InvalidState("a state needs at least the query step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    check_step(steps[i]);
    if (steps[i].marker == StepMarker::kFinal && i + 1 != steps.size()) {
      throw InvalidState("a final step may only appear in the last position");
    }
  }
  if (steps.front().marker == StepMarker::kFinal) {
    throw InvalidState("the query step cannot be final");
  }
  State s;
  s.steps_ = std::move(steps);
  return s;
}

State State::append(ReasoningStep step) const {
  if (terminal()) throw AppendAfterFinal("cannot append to a state ending in a final step");
  check_step(step);
  State out = *this;
  out.steps_.push_back(std::move(step));
  return out;
}

State state_append(const State& s, ReasoningStep z) { return s.append(std::move(z)); }

void SearchConfig::validate() const {
  if (iterations < 1) throw InvalidConfig("iterations must be positive");
  if (children_per_expansion < 1) throw InvalidConfig("children_per_expansion must be positive");
  if (c1 <= 0.0 || c2 <= 0.0) throw InvalidConfig("exploration constants must be positive");
  if (backprop_weight < 0.0 || backprop_weight > 1.0) {
    throw InvalidConfig("backprop_weight must lie in [0, 1]");
  }
  if (!(discount > 0.0) || discount > 1.0) throw InvalidConfig("discount must lie in (0, 1]");
  if (max_depth < 1) throw InvalidConfig("max_depth must be positive");
}

}  // namespace rlm
