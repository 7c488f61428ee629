#ifndef RLM_PIPELINE_REPLAY_HPP_
#define RLM_PIPELINE_REPLAY_HPP_

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

#include "rlm/core/types.hpp"

namespace rlm {

/// One harvested transition (s_{j-1}, z_j) with the MCTS-backpropagated
/// q of the resulting node. Entries come only from pruned trees, so every
/// entry lies on a root-to-terminal path of its source tree.
struct ReplayEntry {
  std::uint64_t tree_id = 0;
  NodeId node_id = 0;
  State parent_state;
  ReasoningStep step;
  double q_mcts = 0.0;   // q(s_j), the node reached by `step`
  double q_parent = 0.0; // q(s_{j-1})
  bool is_terminal = false;
  std::optional<double> reward;
  double advantage = 0.0;

  State child_state() const { return parent_state.append(step); }
};

/// FIFO-bounded store of replay entries. Appends are thread-safe; reads
/// assume the writers have quiesced.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 1000000);

  void push(ReplayEntry entry);
  void push_many(std::vector<ReplayEntry> entries);

  const std::deque<ReplayEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t evicted() const { return evicted_; }

 private:
  void push_locked(ReplayEntry entry);

  std::mutex mu_;
  std::deque<ReplayEntry> entries_;
  std::size_t capacity_;
  std::size_t evicted_ = 0;
};

}  // namespace rlm

#endif  // RLM_PIPELINE_REPLAY_HPP_
