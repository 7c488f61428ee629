#ifndef RLM_BACKENDS_SYNTHETIC_HPP_
#define RLM_BACKENDS_SYNTHETIC_HPP_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlm/backends/backend.hpp"
#include "rlm/core/types.hpp"

namespace rlm {

/// Deterministic sum-to-target reasoning game. The question encodes the
/// game parameters; intermediate steps are "add k" for k in `increments`,
/// and after `depth` additions the only candidate is the final
/// "answer = <sum>" step. The golden answer is the target.
struct SyntheticEnv {
  std::vector<int> increments{1, 2, 3};
  int target = 0;
  int depth = 3;
  double policy_temperature = 1.0;

  std::string question() const;
  static SyntheticEnv from_question(const std::string& text);

  std::string golden() const { return std::to_string(target); }

  int running_sum(const State& state) const;
  /// Number of "add k" steps taken so far.
  int add_depth(const State& state) const;
  bool at_forced_final(const State& state) const;

  ReasoningStep add_step(int k) const;
  ReasoningStep answer_step(const State& state) const;

  /// All candidate steps for a non-terminal state (unlimited m).
  std::vector<ReasoningStep> candidates(const State& state) const;
};

enum class ValueScheme { kBinaryLikelihood, kContinuousDiscounted };

/// Exact state value under the uniform policy, by exhaustive enumeration of
/// every completion. Binary: fraction of correct terminals in [0, 1].
/// Continuous: mean of gamma^(steps-to-terminal) * r with r in {-1, +1}.
double oracle_value(const SyntheticEnv& env, const State& state, double gamma,
                    ValueScheme scheme);

/// Resolves the env for a state: the fixed env if given, otherwise parsed
/// from the state's query step (cached).
class EnvResolver {
 public:
  EnvResolver() = default;
  explicit EnvResolver(SyntheticEnv env) : fixed_(std::move(env)) {}
  const SyntheticEnv& resolve(const State& state) const;

 private:
  std::optional<SyntheticEnv> fixed_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, SyntheticEnv> cache_;
};

class SyntheticPolicy : public PolicyBackend {
 public:
  explicit SyntheticPolicy(std::uint64_t seed = 0) : seed_(seed) {}
  SyntheticPolicy(SyntheticEnv env, std::uint64_t seed)
      : resolver_(std::move(env)), seed_(seed) {}

  std::vector<ReasoningStep> generate(const State& state, int m,
                                      const DiversityParams& params) override;

 private:
  EnvResolver resolver_;
  std::uint64_t seed_ = 0;
};

class OracleValue : public ValueBackend {
 public:
  OracleValue(double gamma, ValueScheme scheme) : gamma_(gamma), scheme_(scheme) {}
  OracleValue(SyntheticEnv env, double gamma, ValueScheme scheme)
      : resolver_(std::move(env)), gamma_(gamma), scheme_(scheme) {}

  std::vector<double> score(const std::vector<State>& states) override;

 private:
  EnvResolver resolver_;
  double gamma_;
  ValueScheme scheme_;
};

/// Seed-deterministic noise scores in [-1, 1]; a pure function of the state
/// text, independent of call order.
class RandomValue : public ValueBackend {
 public:
  explicit RandomValue(std::uint64_t seed) : seed_(seed) {}
  std::vector<double> score(const std::vector<State>& states) override;

 private:
  std::uint64_t seed_;
};

class SumGameVerifier : public Verifier {
 public:
  bool check(const State& terminal_state, const std::string& golden) const override;
};

/// Extracts "<answer>" from a final "answer = <answer>" step, if present.
std::optional<std::string> extract_answer(const State& state);

/// Every reachable state of the env in breadth-first order, starting at the
/// question-only root. Terminal answer states included on request.
std::vector<State> enumerate_states(const SyntheticEnv& env, bool include_terminal);

}  // namespace rlm

#endif  // RLM_BACKENDS_SYNTHETIC_HPP_
