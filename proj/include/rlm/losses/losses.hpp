#ifndef RLM_LOSSES_LOSSES_HPP_
#define RLM_LOSSES_LOSSES_HPP_

#include <utility>
#include <vector>

#include "rlm/metrics/distribution.hpp"

namespace rlm::losses {

// Pure scalar loss/objective math over caller-provided (log-)probabilities.
// All logs are natural unless stated otherwise.

struct LossConfig {
  double clip_epsilon = 0.2;   // in (0, 1)
  double dpo_beta = 1.0;       // > 0
  double kl_weight = 0.0;      // >= 0
  double entropy_weight = 0.0; // >= 0

  void validate() const;
};

/// min(r * A, clip(r, 1-eps, 1+eps) * A).
double ppo_clip_objective(double ratio, double advantage, double epsilon);

/// -(1/|B|) sum_steps sum_tokens p log p. Note the leading minus makes
/// this +mean entropy in nats: adding it with a positive weight penalizes
/// low entropy only if the weight is applied negated.
double entropy_penalty(const std::vector<TokenDistribution>& batch);

double log_sigmoid(double x);

/// log sigmoid(beta * (logp_plus - logp_minus)); simplified form without a
/// reference-policy term.
double dpo_objective(double logp_plus, double logp_minus, double beta);
double dpo_objective_batch(const std::vector<std::pair<double, double>>& logp_pairs,
                           double beta);

/// Per-sample completion cross entropy: -sum of target-token log-probs.
double completion_ce(const std::vector<double>& token_logprobs);
/// Batch loss normalized by the batch size.
double completion_ce_batch(const std::vector<std::vector<double>>& batch);

double bce(double pred, int label);
double bce_batch(const std::vector<std::pair<double, int>>& batch);

double mse(double pred, double target);
double mse_batch(const std::vector<std::pair<double, double>>& batch);

/// Sampled KL estimator: mean of (logp_theta - logp_ref) over aligned
/// per-token log-probs of the sampled tokens.
double kl_term(const std::vector<double>& logp_theta, const std::vector<double>& logp_ref);

}  // namespace rlm::losses

#endif  // RLM_LOSSES_LOSSES_HPP_
