#ifndef RLM_PIPELINE_SELECTION_HPP_
#define RLM_PIPELINE_SELECTION_HPP_

#include <vector>

#include "rlm/core/tree.hpp"
#include "rlm/labeling/labels.hpp"
#include "rlm/labeling/sft.hpp"
#include "rlm/pipeline/replay.hpp"

namespace rlm {

struct PreferencePair {
  State preferred;
  State rejected;
  double q_gap = 0.0;
  bool preferred_on_correct_path = false;
};

/// Sibling pairs (c+, c-) with q(c+) - q(c-) >= margin, over all internal
/// nodes of the given pruned trees. Pairs whose preferred child lies on a
/// verified-correct path come first, then descending q_gap; the list is
/// truncated to max_pairs.
std::vector<PreferencePair> select_dpo_pairs(const std::vector<SearchTree>& pruned_trees,
                                             double margin, std::size_t max_pairs);

struct SftSelection {
  enum class Kind { kTopKByTerminalQ, kQThreshold };
  Kind kind = Kind::kTopKByTerminalQ;
  int k = 1;
  double threshold = 0.0;

  static SftSelection top_k(int k) { return {Kind::kTopKByTerminalQ, k, 0.0}; }
  static SftSelection q_threshold(double t) { return {Kind::kQThreshold, 0, t}; }
};

/// Complete root-to-terminal traces ranked by terminal q (descending).
/// kQThreshold keeps terminals with q strictly above the threshold.
std::vector<SftTrace> select_sft_sequences(const std::vector<SearchTree>& pruned_trees,
                                           const SftSelection& selection);

/// One regression record per buffer entry: input = child state, target =
/// the MCTS q of that child, copied verbatim.
std::vector<QLabel> qvm_targets(const ReplayBuffer& buffer);

}  // namespace rlm

#endif  // RLM_PIPELINE_SELECTION_HPP_
