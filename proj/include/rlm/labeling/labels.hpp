#ifndef RLM_LABELING_LABELS_HPP_
#define RLM_LABELING_LABELS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rlm/backends/backend.hpp"
#include "rlm/backends/synthetic.hpp"
#include "rlm/core/types.hpp"

namespace rlm {

struct SimulationParams {
  int n = 1;           // simulations per label
  double gamma = 1.0;  // discount for the continuous scheme
  int max_depth = 32;  // rollout cap; capped rollouts count as incorrect
  int branching = 8;   // candidates requested per rollout step
  std::uint64_t seed = 0;
  DiversityParams diversity{1.0, true};

  void validate() const;
};

struct ValueLabel {
  State state;
  double value = 0.0;
  ValueScheme scheme = ValueScheme::kBinaryLikelihood;
  int n_simulations = 0;
  bool is_terminal_label = false;
};

/// Regression target for the q-value model; the input is the child state
/// s_{t+1}, which encodes the pair (s_t, a_t).
struct QLabel {
  State state_action;
  double target = 0.0;
};

struct RolloutResult {
  double reward = -1.0;  // {-1, +1}
  int depth = 0;         // steps appended to reach the terminal
};

/// Samples one completion of `state` to a terminal (or to max_depth, which
/// counts as incorrect), picking uniformly among the policy's candidates.
RolloutResult simulate_rollout(const State& state, PolicyBackend& policy,
                               const Verifier& verifier, const std::string& golden,
                               int max_depth, int branching, const DiversityParams& diversity,
                               std::mt19937_64& rng);

struct MonteCarloLabels {
  ValueLabel binary;
  ValueLabel continuous;
};

/// Both label schemes from one shared batch of simulations. Simulation i runs
/// on an independent rng substream of (params.seed, i), so results do not
/// depend on evaluation order. With gamma = 1 the continuous value equals
/// 2 * binary - 1 bit-for-bit.
MonteCarloLabels monte_carlo_labels(const State& state, PolicyBackend& policy,
                                    const Verifier& verifier, const std::string& golden,
                                    const SimulationParams& params);

ValueLabel binary_value_label(const State& state, PolicyBackend& policy,
                              const Verifier& verifier, const std::string& golden,
                              const SimulationParams& params);

ValueLabel continuous_value_label(const State& state, PolicyBackend& policy,
                                  const Verifier& verifier, const std::string& golden,
                                  const SimulationParams& params);

/// Non-terminal child: target = gamma * value estimate started at the child.
/// Terminal child: target = the verifier reward, exactly.
QLabel q_label(const State& child_state, std::optional<double> parent_label_or_reward,
               double gamma);

}  // namespace rlm

#endif  // RLM_LABELING_LABELS_HPP_
