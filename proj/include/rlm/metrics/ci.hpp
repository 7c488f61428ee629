#ifndef RLM_METRICS_CI_HPP_
#define RLM_METRICS_CI_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "rlm/errors.hpp"

namespace rlm {

/// Q questions x K sampled answers, cells in {0, 1}.
struct CorrectnessMatrix {
  std::vector<std::vector<int>> rows;

  std::size_t questions() const { return rows.size(); }
  std::size_t answers() const { return rows.empty() ? 0 : rows.front().size(); }
  void validate() const;

  static CorrectnessMatrix bernoulli(std::size_t questions, std::size_t answers, double p,
                                     std::uint64_t seed);
};

namespace metrics {

/// For each set size: draw `resamples` question subsets with replacement,
/// compute the K per-answer-column pass@1 means over the subset, take the
/// normal-approximation 95% CI length over those K values
/// (2 * 1.96 * sd / sqrt(K)), and average across resamples. Sizes run on
/// seeded per-size substreams, so results are independent of evaluation
/// order.
std::vector<std::pair<int, double>> ci_length_curve(const CorrectnessMatrix& matrix,
                                                    const std::vector<int>& set_sizes,
                                                    int resamples, std::uint64_t seed);

}  // namespace metrics
}  // namespace rlm

#endif  // RLM_METRICS_CI_HPP_
