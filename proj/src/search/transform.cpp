#include "rlm/search/transform.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

namespace rlm {

SearchTree prune_incomplete(const SearchTree& tree) {
  std::vector<bool> keep(tree.size(), false);
  keep[tree.root()] = true;
  for (NodeId t : tree.terminal_nodes()) {
    for (std::optional<NodeId> cur = t; cur && !keep[*cur]; cur = tree.parent(*cur)) {
      keep[*cur] = true;
    }
  }

  SearchTree pruned(tree.state_of(tree.root()));
  pruned.stats(pruned.root()) = tree.stats(tree.root());
  std::unordered_map<NodeId, NodeId> remap{{tree.root(), pruned.root()}};
  for (NodeId id = 1; id < tree.size(); ++id) {
    if (!keep[id]) continue;
    const NodeStats& st = tree.stats(id);
    const NodeId new_id = pruned.add_child(remap.at(*tree.parent(id)), tree.step_of(id),
                                           st.q, st.terminal, st.reward);
    pruned.stats(new_id).visits = st.visits;
    remap.emplace(id, new_id);
  }
  return pruned;
}

std::vector<NodeId> ranked_terminals(const SearchTree& tree) {
  std::vector<NodeId> terms = tree.terminal_nodes();
  std::stable_sort(terms.begin(), terms.end(), [&](NodeId a, NodeId b) {
    return tree.stats(a).q > tree.stats(b).q;
  });
  return terms;
}

State linearize(const SearchTree& tree, const LinearizeStrategy& strategy) {
  if (strategy.k < 1) throw InvalidConfig("linearize: k must be positive");
  std::vector<NodeId> ranked = ranked_terminals(tree);
  if (ranked.empty()) throw NoTerminalPath("linearize: the tree has no terminal path");

  const int k = strategy.kind == LinearizeStrategy::Kind::kBestPathOnly
                    ? 1
                    : std::min<int>(strategy.k, static_cast<int>(ranked.size()));

  std::vector<ReasoningStep> chain;
  for (int rank = 0; rank < k; ++rank) {
    const auto& steps = tree.state_of(ranked[rank]).steps();
    const std::size_t first = rank == 0 ? 0 : 1;  // later paths drop the repeated query
    for (std::size_t i = first; i < steps.size(); ++i) chain.push_back(steps[i]);
  }
  for (auto& step : chain) step.marker = StepMarker::kIntermediate;
  chain.back().marker = StepMarker::kFinal;
  return State::from_steps(std::move(chain));
}

}  // namespace rlm
