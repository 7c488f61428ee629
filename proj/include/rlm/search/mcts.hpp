#ifndef RLM_SEARCH_MCTS_HPP_
#define RLM_SEARCH_MCTS_HPP_

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rlm/backends/backend.hpp"
#include "rlm/core/tree.hpp"
#include "rlm/core/types.hpp"

namespace rlm {

struct MctsStats {
  int expansions = 0;
  int terminal_revisits = 0;
  int depth_capped_hits = 0;
  int duplicates_dropped = 0;
};

struct MctsOutcome {
  explicit MctsOutcome(SearchTree t) : tree(std::move(t)) {}

  SearchTree tree;
  std::optional<NodeId> best_node;
  std::optional<Trajectory> best_path;
  int iterations_run = 0;
  int terminals_found = 0;
  MctsStats stats;
  std::vector<std::string> errors;
};

/// Node-based PUCT selection score of `child` under `parent`:
///   q(c) + sqrt(max(N(p)-1, 0)) / (1 + N(c)) * (c1 + log((N(p)+c2)/c2)).
double puct_score(const NodeStats& parent, const NodeStats& child, double c1, double c2);

/// Descends from the root along argmax-score children until a leaf; ties are
/// broken uniformly at random from the caller's rng.
NodeId select_leaf(const SearchTree& tree, double c1, double c2, std::mt19937_64& rng);

/// Appends up to M children to `leaf`, initializing q from one batched value
/// call over the child states. In training mode terminal children get the
/// verifier reward as q. Duplicate candidate steps are dropped.
std::vector<NodeId> expand(SearchTree& tree, NodeId leaf, PolicyBackend& policy,
                           ValueBackend& value, const SearchConfig& cfg,
                           const Verifier* verifier, const std::string* golden,
                           const DiversityParams& params = {}, MctsStats* stats = nullptr);

/// Updates the ancestors of `from` (exclusive) bottom-up:
///   N(s) += 1;  q(s) <- (1-alpha) q(s) + alpha * gamma * sum_c w(c) q(c),
/// with w(c) = N(c) / sum N(siblings).
void backpropagate(SearchTree& tree, NodeId from, double alpha, double gamma);

MctsOutcome run_mcts(const std::string& question, const SearchConfig& cfg,
                     PolicyBackend& policy, ValueBackend& value,
                     const Verifier* verifier = nullptr, const std::string* golden = nullptr,
                     const DiversityParams& params = {});

/// Variant starting from an existing state (e.g. resuming mid-reasoning).
MctsOutcome run_mcts(State root_state, const SearchConfig& cfg, PolicyBackend& policy,
                     ValueBackend& value, const Verifier* verifier = nullptr,
                     const std::string* golden = nullptr, const DiversityParams& params = {});

}  // namespace rlm

#endif  // RLM_SEARCH_MCTS_HPP_
