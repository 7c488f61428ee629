#include "rlm/losses/losses.hpp"

#include <algorithm>
#include <cmath>

namespace rlm::losses {

void LossConfig::validate() const {
  if (!(clip_epsilon > 0.0) || clip_epsilon >= 1.0) {
    throw InvalidConfig("clip epsilon must lie in (0, 1)");
  }
  if (!(dpo_beta > 0.0)) throw InvalidConfig("dpo beta must be positive");
  if (kl_weight < 0.0 || entropy_weight < 0.0) {
    throw InvalidConfig("regularization weights must be non-negative");
  }
  if (!std::isfinite(clip_epsilon) || !std::isfinite(dpo_beta) || !std::isfinite(kl_weight) ||
      !std::isfinite(entropy_weight)) {
    throw InvalidConfig("loss config values must be finite");
  }
}

double ppo_clip_objective(double ratio, double advantage, double epsilon) {
  if (!(ratio > 0.0)) throw NonPositiveRatio("policy ratio must be positive");
  if (!(epsilon > 0.0) || epsilon >= 1.0) throw InvalidConfig("clip epsilon must lie in (0, 1)");
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double entropy_penalty(const std::vector<TokenDistribution>& batch) {
  if (batch.empty()) throw EmptyInput("entropy penalty over an empty batch");
  double acc = 0.0;
  for (const TokenDistribution& d : batch) {
    d.validate();
    for (double p : d.probs) {
      if (p > 0.0) acc += p * std::log(p);
    }
  }
  return -acc / static_cast<double>(batch.size());
}

double log_sigmoid(double x) {
  // stable: log sigma(x) = -log1p(exp(-x)) for x >= 0, x - log1p(exp(x)) otherwise
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double dpo_objective(double logp_plus, double logp_minus, double beta) {
  if (!std::isfinite(logp_plus) || !std::isfinite(logp_minus)) {
    throw DomainError("dpo objective requires finite log-probabilities");
  }
  if (!(beta > 0.0)) throw InvalidConfig("dpo beta must be positive");
  return log_sigmoid(beta * (logp_plus - logp_minus));
}

double dpo_objective_batch(const std::vector<std::pair<double, double>>& logp_pairs,
                           double beta) {
  if (logp_pairs.empty()) throw EmptyInput("dpo objective over an empty batch");
  double acc = 0.0;
  for (const auto& [plus, minus] : logp_pairs) acc += dpo_objective(plus, minus, beta);
  return acc / static_cast<double>(logp_pairs.size());
}

double completion_ce(const std::vector<double>& token_logprobs) {
  double acc = 0.0;
  for (double lp : token_logprobs) {
    if (lp > 0.0) throw PositiveLogProb("log-probabilities must be <= 0");
    acc -= lp;
  }
  return acc;
}

double completion_ce_batch(const std::vector<std::vector<double>>& batch) {
  if (batch.empty()) throw EmptyInput("cross entropy over an empty batch");
  double acc = 0.0;
  for (const auto& sample : batch) acc += completion_ce(sample);
  return acc / static_cast<double>(batch.size());
}

double bce(double pred, int label) {
  if (!(pred > 0.0) || !(pred < 1.0)) {
    throw DomainError("bce prediction must lie strictly inside (0, 1)");
  }
  if (label != 0 && label != 1) throw DomainError("bce label must be 0 or 1");
  return label == 1 ? -std::log(pred) : -std::log(1.0 - pred);
}

double bce_batch(const std::vector<std::pair<double, int>>& batch) {
  if (batch.empty()) throw EmptyInput("bce over an empty batch");
  double acc = 0.0;
  for (const auto& [pred, label] : batch) acc += bce(pred, label);
  return acc / static_cast<double>(batch.size());
}

double mse(double pred, double target) {
  const double d = pred - target;
  return d * d;
}

double mse_batch(const std::vector<std::pair<double, double>>& batch) {
  if (batch.empty()) throw EmptyInput("mse over an empty batch");
  double acc = 0.0;
  for (const auto& [pred, target] : batch) acc += mse(pred, target);
  return acc / static_cast<double>(batch.size());
}

double kl_term(const std::vector<double>& logp_theta, const std::vector<double>& logp_ref) {
  if (logp_theta.size() != logp_ref.size()) {
    throw LengthMismatch("kl term requires aligned log-prob lists");
  }
  if (logp_theta.empty()) throw EmptyInput("kl term over empty lists");
  double acc = 0.0;
  for (std::size_t i = 0; i < logp_theta.size(); ++i) {
    acc += logp_theta[i] - logp_ref[i];
  }
  return acc / static_cast<double>(logp_theta.size());
}

}  // namespace rlm::losses
