#include "rlm/backends/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rlm/util/rng.hpp"

namespace rlm {

namespace {

constexpr const char* kAddPrefix = "add ";
constexpr const char* kAnswerPrefix = "answer = ";

bool parse_int(const std::string& text, std::size_t pos, int* out) {
  try {
    std::size_t used = 0;
    *out = std::stoi(text.substr(pos), &used);
    return used > 0;
  } catch (...) {
    return false;
  }
}

}  // namespace

std::string SyntheticEnv::question() const {
  std::ostringstream os;
  os << "sum-game target=" << target << " depth=" << depth << " increments=";
  for (std::size_t i = 0; i < increments.size(); ++i) {
    if (i > 0) os << ',';
    os << increments[i];
  }
  return os.str();
}

SyntheticEnv SyntheticEnv::from_question(const std::string& text) {
  SyntheticEnv env;
  env.increments.clear();
  const std::string head = "sum-game ";
  if (text.rfind(head, 0) != 0) throw StateNotInEnv("not a sum-game question: " + text);
  std::istringstream is(text.substr(head.size()));
  std::string field;
  bool have_target = false, have_depth = false;
  while (is >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw StateNotInEnv("malformed question field: " + field);
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "target") {
      env.target = std::stoi(val);
      have_target = true;
    } else if (key == "depth") {
      env.depth = std::stoi(val);
      have_depth = true;
    } else if (key == "increments") {
      std::istringstream vs(val);
      std::string item;
      while (std::getline(vs, item, ',')) env.increments.push_back(std::stoi(item));
    } else {
      throw StateNotInEnv("unknown question field: " + key);
    }
  }
  if (!have_target || !have_depth || env.increments.empty() || env.depth < 1) {
    throw StateNotInEnv("incomplete sum-game question: " + text);
  }
  return env;
}

int SyntheticEnv::running_sum(const State& state) const {
  int sum = 0;
  const auto& steps = state.steps();
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const std::string& t = steps[i].text;
    if (t.rfind(kAddPrefix, 0) == 0) {
      int k = 0;
      if (!parse_int(t, std::string(kAddPrefix).size(), &k)) {
        throw StateNotInEnv("malformed add step: " + t);
      }
      sum += k;
    } else if (t.rfind(kAnswerPrefix, 0) == 0) {
      if (i + 1 != steps.size()) throw StateNotInEnv("answer step before the end");
    } else {
      throw StateNotInEnv("step not part of the sum game: " + t);
    }
  }
  return sum;
}

int SyntheticEnv::add_depth(const State& state) const {
  int d = static_cast<int>(state.depth());
  if (state.terminal()) d -= 1;  // the answer step is not an addition
  return d;
}

bool SyntheticEnv::at_forced_final(const State& state) const {
  return add_depth(state) >= depth;
}

ReasoningStep SyntheticEnv::add_step(int k) const {
  return ReasoningStep{kAddPrefix + std::to_string(k), StepMarker::kIntermediate};
}

ReasoningStep SyntheticEnv::answer_step(const State& state) const {
  return ReasoningStep{kAnswerPrefix + std::to_string(running_sum(state)), StepMarker::kFinal};
}

std::vector<ReasoningStep> SyntheticEnv::candidates(const State& state) const {
  if (state.terminal()) throw StateNotInEnv("terminal states have no candidates");
  if (at_forced_final(state)) return {answer_step(state)};
  std::vector<ReasoningStep> out;
  out.reserve(increments.size());
  for (int k : increments) out.push_back(add_step(k));
  return out;
}

namespace {

// Counts correct/total completions and accumulates the discounted reward
// sum from `state` under the uniform policy.
struct Enumeration {
  std::int64_t correct = 0;
  std::int64_t total = 0;
  double discounted_sum = 0.0;
};

void enumerate(const SyntheticEnv& env, int sum, int add_depth, int steps_taken, double gamma,
               Enumeration* e) {
  if (add_depth >= env.depth) {
    // single forced answer step
    const bool ok = sum == env.target;
    e->total += 1;
    e->correct += ok ? 1 : 0;
    e->discounted_sum += std::pow(gamma, steps_taken + 1) * (ok ? 1.0 : -1.0);
    return;
  }
  for (int k : env.increments) {
    enumerate(env, sum + k, add_depth + 1, steps_taken + 1, gamma, e);
  }
}

}  // namespace

double oracle_value(const SyntheticEnv& env, const State& state, double gamma,
                    ValueScheme scheme) {
  if (state.terminal()) {
    const bool ok = std::to_string(env.target) == extract_answer(state).value_or("");
    if (scheme == ValueScheme::kBinaryLikelihood) return ok ? 1.0 : 0.0;
    return ok ? 1.0 : -1.0;
  }
  Enumeration e;
  enumerate(env, env.running_sum(state), env.add_depth(state), 0, gamma, &e);
  if (scheme == ValueScheme::kBinaryLikelihood) {
    return static_cast<double>(e.correct) / static_cast<double>(e.total);
  }
  if (gamma == 1.0) {
    // With unit weights the mean of +-1 rewards is affine in the success
    // ratio; evaluating it this way keeps the two schemes bit-consistent.
    return 2.0 * (static_cast<double>(e.correct) / static_cast<double>(e.total)) - 1.0;
  }
  return e.discounted_sum / static_cast<double>(e.total);
}

const SyntheticEnv& EnvResolver::resolve(const State& state) const {
  if (fixed_) return *fixed_;
  const std::string& q = state.query().text;
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(q);
  if (it == cache_.end()) {
    it = cache_.emplace(q, SyntheticEnv::from_question(q)).first;
  }
  return it->second;
}

std::vector<ReasoningStep> SyntheticPolicy::generate(const State& state, int m,
                                                     const DiversityParams& params) {
  if (m < 1) return {};
  const SyntheticEnv& env = resolver_.resolve(state);
  std::vector<ReasoningStep> cands = env.candidates(state);
  if (static_cast<int>(cands.size()) <= m) return cands;
  if (params.temperature <= 0.0) {
    cands.resize(m);  // deterministic top-m
    return cands;
  }
  // Sample a distinct subset; keyed by state so call order is irrelevant.
  std::mt19937_64 rng = substream(seed_, fnv1a64(state.last().text) ^
                                             splitmix64(state.steps().size()));
  std::shuffle(cands.begin(), cands.end(), rng);
  cands.resize(m);
  return cands;
}

std::vector<double> OracleValue::score(const std::vector<State>& states) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const State& s : states) {
    out.push_back(oracle_value(resolver_.resolve(s), s, gamma_, scheme_));
  }
  return out;
}

std::vector<double> RandomValue::score(const std::vector<State>& states) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const State& s : states) {
    std::uint64_t h = splitmix64(seed_);
    for (const auto& step : s.steps()) h = splitmix64(h ^ fnv1a64(step.text));
    // map to [-1, 1]
    out.push_back(2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0);
  }
  return out;
}

bool SumGameVerifier::check(const State& terminal_state, const std::string& golden) const {
  auto ans = extract_answer(terminal_state);
  return ans && *ans == golden;
}

std::optional<std::string> extract_answer(const State& state) {
  if (!state.terminal()) return std::nullopt;
  const std::string& t = state.last().text;
  const std::string prefix = kAnswerPrefix;
  if (t.rfind(prefix, 0) != 0) return std::nullopt;
  return t.substr(prefix.size());
}

std::vector<State> enumerate_states(const SyntheticEnv& env, bool include_terminal) {
  std::vector<State> out;
  std::vector<State> frontier{State(ReasoningStep{env.question(), StepMarker::kIntermediate})};
  while (!frontier.empty()) {
    std::vector<State> next;
    for (const State& s : frontier) {
      out.push_back(s);
      if (s.terminal()) continue;
      for (const ReasoningStep& step : env.candidates(s)) next.push_back(s.append(step));
    }
    frontier = std::move(next);
  }
  if (!include_terminal) {
    std::erase_if(out, [](const State& s) { return s.terminal(); });
  }
  return out;
}

}  // namespace rlm
