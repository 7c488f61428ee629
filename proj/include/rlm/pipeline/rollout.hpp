#ifndef RLM_PIPELINE_ROLLOUT_HPP_
#define RLM_PIPELINE_ROLLOUT_HPP_

#include <string>
#include <vector>

#include "rlm/backends/backend.hpp"
#include "rlm/core/tree.hpp"
#include "rlm/pipeline/replay.hpp"

namespace rlm {

struct RolloutQuestion {
  std::string question;
  std::string golden;
};

struct QuestionReport {
  std::string question;
  bool ok = false;
  std::string error;
  int terminals_found = 0;
  bool solved = false;  // best path is a verified-correct terminal
  std::size_t entries_added = 0;
};

struct RolloutReport {
  std::vector<QuestionReport> questions;
  std::vector<SearchTree> pruned_trees;  // aligned with questions (root-only on failure)
  int solved = 0;
  int failed = 0;
  std::size_t buffer_growth = 0;

  double solve_rate() const {
    return questions.empty() ? 0.0 : static_cast<double>(solved) / questions.size();
  }
};

/// Rollout phase: per question run training-mode MCTS, prune the tree to
/// verified paths, and harvest (state, step, q) entries into the buffer.
/// Question i uses seed cfg.seed + i. Questions run on a bounded worker
/// pool; buffer order is deterministic (question order, then node creation
/// order). Per-question failures are recorded and skipped; throws only if
/// every question fails.
RolloutReport rollout_phase(const std::vector<RolloutQuestion>& questions,
                            const SearchConfig& cfg, PolicyBackend& policy,
                            ValueBackend& value, const Verifier& verifier,
                            ReplayBuffer* buffer, int workers = 4);

/// The (s_{j-1}, z_j, q) entries of one pruned tree, with TD advantages
/// attached; node-id order.
std::vector<ReplayEntry> harvest_entries(const SearchTree& pruned_tree,
                                         std::uint64_t tree_id, double gamma);

}  // namespace rlm

#endif  // RLM_PIPELINE_ROLLOUT_HPP_
