#include "rlm/backends/backend.hpp"

namespace rlm {

std::vector<std::vector<ReasoningStep>> PolicyBackend::generate_batch(
    const std::vector<State>& states, int m, const DiversityParams& params) {
  std::vector<std::vector<ReasoningStep>> out;
  out.reserve(states.size());
  for (const State& s : states) out.push_back(generate(s, m, params));
  return out;
}

}  // namespace rlm
