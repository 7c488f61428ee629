#include "rlm/pipeline/replay.hpp"

#include <cmath>
#include <utility>

#include "rlm/errors.hpp"

namespace rlm {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw InvalidConfig("replay buffer capacity must be positive");
}

void ReplayBuffer::push_locked(ReplayEntry entry) {
  if (std::isnan(entry.q_mcts) || entry.q_mcts < -1.0 || entry.q_mcts > 1.0) {
    throw InvalidState("replay entry q_mcts out of [-1, 1]");
  }
  if (entries_.size() == capacity_) {
    entries_.pop_front();
    evicted_ += 1;
  }
  entries_.push_back(std::move(entry));
}

void ReplayBuffer::push(ReplayEntry entry) {
  std::lock_guard<std::mutex> lock(mu_);
  push_locked(std::move(entry));
}

void ReplayBuffer::push_many(std::vector<ReplayEntry> entries) {
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& e : entries) push_locked(std::move(e));
}

}  // namespace rlm
