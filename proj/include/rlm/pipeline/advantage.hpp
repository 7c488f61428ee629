#ifndef RLM_PIPELINE_ADVANTAGE_HPP_
#define RLM_PIPELINE_ADVANTAGE_HPP_

#include <vector>

#include "rlm/core/tree.hpp"

namespace rlm {

/// TD-style credit for the step into node_id, derived from MCTS q values:
///   v_next = (1/gamma) q(s_i),  v_curr = (1/gamma) q(s_{i-1}),
///   A = reward_term + gamma * v_next - v_curr.
/// At terminal nodes the reward appears both in reward_term and (through q)
/// in v_next; that double count is the written formula. Set
/// zero_v_next_at_terminal to use v_next = 0 there instead.
struct AdvantageRecord {
  NodeId node_id = 0;
  double advantage = 0.0;
  double v_next = 0.0;
  double v_curr = 0.0;
  double reward_term = 0.0;
};

struct AdvantageOptions {
  double gamma = 1.0;
  bool zero_v_next_at_terminal = false;
};

/// One record per non-root node of a pruned tree whose leaves are all
/// terminal with rewards set. Records are emitted in node-id order.
std::vector<AdvantageRecord> compute_advantages(const SearchTree& pruned_tree,
                                                const AdvantageOptions& options);

}  // namespace rlm

#endif  // RLM_PIPELINE_ADVANTAGE_HPP_
