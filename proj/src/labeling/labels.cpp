#include "rlm/labeling/labels.hpp"

#include <cmath>

#include "rlm/util/rng.hpp"

namespace rlm {

void SimulationParams::validate() const {
  if (n < 1) throw InvalidConfig("simulation count must be positive");
  if (!(gamma > 0.0) || gamma > 1.0) throw InvalidConfig("gamma must lie in (0, 1]");
  if (max_depth < 1) throw InvalidConfig("max_depth must be positive");
  if (branching < 1) throw InvalidConfig("branching must be positive");
}

RolloutResult simulate_rollout(const State& state, PolicyBackend& policy,
                               const Verifier& verifier, const std::string& golden,
                               int max_depth, int branching, const DiversityParams& diversity,
                               std::mt19937_64& rng) {
  if (state.terminal()) throw InvalidState("cannot roll out from a terminal state");
  State cur = state;
  int depth = 0;
  while (depth < max_depth) {
    std::vector<ReasoningStep> cands = policy.generate(cur, branching, diversity);
    if (cands.empty()) {
      throw BackendFailure("policy returned no candidates during rollout", 1, 0);
    }
    std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
    cur = cur.append(cands[pick(rng)]);
    ++depth;
    if (cur.terminal()) {
      return {verifier.check(cur, golden) ? 1.0 : -1.0, depth};
    }
  }
  return {-1.0, max_depth};  // unverifiable non-termination counts as incorrect
}

MonteCarloLabels monte_carlo_labels(const State& state, PolicyBackend& policy,
                                    const Verifier& verifier, const std::string& golden,
                                    const SimulationParams& params) {
  params.validate();
  MonteCarloLabels out{
      {state, 0.0, ValueScheme::kBinaryLikelihood, params.n, false},
      {state, 0.0, ValueScheme::kContinuousDiscounted, params.n, false},
  };
  if (state.terminal()) {
    const bool ok = verifier.check(state, golden);
    out.binary.value = ok ? 1.0 : 0.0;
    out.binary.is_terminal_label = true;
    out.binary.n_simulations = 0;
    out.continuous.value = ok ? 1.0 : -1.0;
    out.continuous.is_terminal_label = true;
    out.continuous.n_simulations = 0;
    return out;
  }

  std::int64_t correct = 0;
  double discounted_sum = 0.0;
  for (int i = 0; i < params.n; ++i) {
    std::mt19937_64 rng = substream(params.seed, static_cast<std::uint64_t>(i));
    const RolloutResult r = simulate_rollout(state, policy, verifier, golden,
                                             params.max_depth, params.branching,
                                             params.diversity, rng);
    if (r.reward > 0.0) correct += 1;
    discounted_sum += std::pow(params.gamma, r.depth) * r.reward;
  }
  const double n = static_cast<double>(params.n);
  out.binary.value = static_cast<double>(correct) / n;
  if (params.gamma == 1.0) {
    // unit weights: evaluate via the success ratio so both schemes agree
    // bit-for-bit (mean of +-1 rewards is affine in the ratio)
    out.continuous.value = 2.0 * out.binary.value - 1.0;
  } else {
    out.continuous.value = discounted_sum / n;
  }
  return out;
}

ValueLabel binary_value_label(const State& state, PolicyBackend& policy,
                              const Verifier& verifier, const std::string& golden,
                              const SimulationParams& params) {
  return monte_carlo_labels(state, policy, verifier, golden, params).binary;
}

ValueLabel continuous_value_label(const State& state, PolicyBackend& policy,
                                  const Verifier& verifier, const std::string& golden,
                                  const SimulationParams& params) {
  return monte_carlo_labels(state, policy, verifier, golden, params).continuous;
}

QLabel q_label(const State& child_state, std::optional<double> parent_label_or_reward,
               double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0) throw InvalidConfig("gamma must lie in (0, 1]");
  if (child_state.terminal()) {
    if (!parent_label_or_reward ||
        (*parent_label_or_reward != 1.0 && *parent_label_or_reward != -1.0)) {
      throw MissingVerifierReward("terminal q-label requires a verifier reward of +-1");
    }
    return {child_state, *parent_label_or_reward};
  }
  if (!parent_label_or_reward) {
    throw DomainError("non-terminal q-label requires a value estimate");
  }
  const double v = *parent_label_or_reward;
  if (v < -1.0 || v > 1.0) throw DomainError("value estimate must lie in [-1, 1]");
  return {child_state, gamma * v};
}

}  // namespace rlm
