#include "rlm/metrics/distribution.hpp"

#include <cmath>

namespace rlm {

void TokenDistribution::validate() const {
  if (probs.empty()) throw InvalidDistribution("distribution is empty");
  double sum = 0.0;
  for (double p : probs) {
    if (std::isnan(p) || p < 0.0) throw InvalidDistribution("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidDistribution("probabilities sum to " + std::to_string(sum));
  }
}

namespace metrics {

double entropy_bits(const TokenDistribution& d) {
  d.validate();
  double h = 0.0;
  for (double p : d.probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double varentropy(const TokenDistribution& d) {
  const double h = entropy_bits(d);
  double v = 0.0;
  for (double p : d.probs) {
    if (p > 0.0) {
      const double dev = std::abs(std::log2(p)) - std::abs(h);
      v += p * dev * dev;
    }
  }
  return v;
}

double gini(const TokenDistribution& d) {
  d.validate();
  const std::size_t n = d.probs.size();
  if (n < 2) throw InvalidDistribution("gini needs at least two entries");
  double acc = 0.0;
  for (double a : d.probs) {
    for (double b : d.probs) acc += std::abs(a - b);
  }
  return acc / (2.0 * static_cast<double>(n));
}

double prob_variance(const TokenDistribution& d) {
  d.validate();
  const double n = static_cast<double>(d.probs.size());
  const double mean = 1.0 / n;  // probabilities sum to 1
  double acc = 0.0;
  for (double p : d.probs) acc += (p - mean) * (p - mean);
  return acc / n;
}

UncertaintyFlag uncertainty_flags(double top1, double top2,
                                  const UncertaintyThresholds& thresholds) {
  if (!(top1 >= top2) || top2 < 0.0) {
    throw OrderViolation("expected top1 >= top2 >= 0");
  }
  const bool low = top1 < thresholds.top1;
  const bool contested = top2 > thresholds.top2;
  if (low && contested) return UncertaintyFlag::kHighUncertainty;
  if (low) return UncertaintyFlag::kLowCertainty;
  if (contested) return UncertaintyFlag::kContested;
  return UncertaintyFlag::kConfident;
}

std::string flag_name(UncertaintyFlag flag) {
  switch (flag) {
    case UncertaintyFlag::kConfident: return "confident";
    case UncertaintyFlag::kLowCertainty: return "low_certainty";
    case UncertaintyFlag::kContested: return "contested";
    case UncertaintyFlag::kHighUncertainty: return "high_uncertainty";
  }
  return "unknown";
}

}  // namespace metrics
}  // namespace rlm
