#ifndef RLM_METRICS_DISTRIBUTION_HPP_
#define RLM_METRICS_DISTRIBUTION_HPP_

#include <string>
#include <vector>

#include "rlm/errors.hpp"

namespace rlm {

struct TokenDistribution {
  std::vector<double> probs;

  /// Each entry >= 0 and the sum within 1e-9 of 1.
  void validate() const;
};

namespace metrics {

/// H = -sum p_i log2 p_i, with 0 log 0 := 0.
double entropy_bits(const TokenDistribution& d);

/// sum p_i (|log2 p_i| - |H|)^2.
double varentropy(const TokenDistribution& d);

/// Mean absolute difference normalized by 2n (mass sums to 1); needs n >= 2.
double gini(const TokenDistribution& d);

/// Population variance of the probability values.
double prob_variance(const TokenDistribution& d);

struct UncertaintyThresholds {
  double top1 = 0.8;
  double top2 = 0.1;
};

enum class UncertaintyFlag { kConfident, kLowCertainty, kContested, kHighUncertainty };

/// LowCertainty iff top1 < 0.8 only; Contested iff top2 > 0.1 only;
/// HighUncertainty iff both; Confident otherwise.
UncertaintyFlag uncertainty_flags(double top1, double top2,
                                  const UncertaintyThresholds& thresholds = {});

std::string flag_name(UncertaintyFlag flag);

}  // namespace metrics
}  // namespace rlm

#endif  // RLM_METRICS_DISTRIBUTION_HPP_
