#ifndef RLM_SEARCH_TRANSFORM_HPP_
#define RLM_SEARCH_TRANSFORM_HPP_

#include <vector>

#include "rlm/core/tree.hpp"

namespace rlm {

/// Subtree induced by all nodes lying on a root-to-terminal path; the root is
/// kept even when no terminal exists. Ids are re-assigned densely in the
/// original creation order; stats are copied verbatim.
SearchTree prune_incomplete(const SearchTree& tree);

struct LinearizeStrategy {
  enum class Kind { kBestPathOnly, kConcatTopK };
  Kind kind = Kind::kBestPathOnly;
  int k = 1;

  static LinearizeStrategy best_path_only() { return {Kind::kBestPathOnly, 1}; }
  static LinearizeStrategy concat_top_k(int k) { return {Kind::kConcatTopK, k}; }
};

/// Flattens the tree into a single chain. BestPathOnly emits the best
/// terminal path's steps; ConcatTopK concatenates the top-k q-ranked
/// root-to-terminal paths in rank order (dropping the repeated query of
/// later paths), re-marking all but the last final step as intermediate.
State linearize(const SearchTree& tree, const LinearizeStrategy& strategy);

/// Terminal node ids ranked by (q desc, creation order asc).
std::vector<NodeId> ranked_terminals(const SearchTree& tree);

}  // namespace rlm

#endif  // RLM_SEARCH_TRANSFORM_HPP_
