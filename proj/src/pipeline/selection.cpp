#include "rlm/pipeline/selection.hpp"

#include <algorithm>
#include <tuple>

namespace rlm {

namespace {

// Nodes with a descendant terminal carrying reward +1.
std::vector<bool> correct_path_marks(const SearchTree& tree) {
  std::vector<bool> marks(tree.size(), false);
  for (NodeId t : tree.terminal_nodes()) {
    if (!tree.stats(t).reward || *tree.stats(t).reward <= 0.0) continue;
    for (std::optional<NodeId> cur = t; cur && !marks[*cur]; cur = tree.parent(*cur)) {
      marks[*cur] = true;
    }
  }
  return marks;
}

}  // namespace

std::vector<PreferencePair> select_dpo_pairs(const std::vector<SearchTree>& pruned_trees,
                                             double margin, std::size_t max_pairs) {
  if (!(margin > 0.0)) throw InvalidConfig("dpo margin must be positive");

  struct Candidate {
    PreferencePair pair;
    std::size_t tree_index;
    NodeId plus;
    NodeId minus;
  };
  std::vector<Candidate> found;
  for (std::size_t ti = 0; ti < pruned_trees.size(); ++ti) {
    const SearchTree& tree = pruned_trees[ti];
    const std::vector<bool> correct = correct_path_marks(tree);
    for (NodeId id = 0; id < tree.size(); ++id) {
      const auto& kids = tree.children(id);
      for (NodeId a : kids) {
        for (NodeId b : kids) {
          if (a == b) continue;
          const double gap = tree.stats(a).q - tree.stats(b).q;
          if (gap < margin) continue;
          found.push_back({PreferencePair{tree.state_of(a), tree.state_of(b), gap,
                                          correct[a]},
                           ti, a, b});
        }
      }
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Candidate& x, const Candidate& y) {
    return std::make_tuple(!x.pair.preferred_on_correct_path, -x.pair.q_gap, x.tree_index,
                           x.plus, x.minus) <
           std::make_tuple(!y.pair.preferred_on_correct_path, -y.pair.q_gap, y.tree_index,
                           y.plus, y.minus);
  });
  if (found.size() > max_pairs) {
    found.erase(found.begin() + static_cast<std::ptrdiff_t>(max_pairs), found.end());
  }

  std::vector<PreferencePair> out;
  out.reserve(found.size());
  for (auto& c : found) out.push_back(std::move(c.pair));
  return out;
}

std::vector<SftTrace> select_sft_sequences(const std::vector<SearchTree>& pruned_trees,
                                           const SftSelection& selection) {
  struct Ranked {
    double q;
    std::size_t tree_index;
    NodeId node;
  };
  std::vector<Ranked> ranked;
  for (std::size_t ti = 0; ti < pruned_trees.size(); ++ti) {
    for (NodeId t : pruned_trees[ti].terminal_nodes()) {
      ranked.push_back({pruned_trees[ti].stats(t).q, ti, t});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) { return a.q > b.q; });

  std::vector<SftTrace> out;
  for (const Ranked& r : ranked) {
    if (selection.kind == SftSelection::Kind::kTopKByTerminalQ) {
      if (static_cast<int>(out.size()) >= selection.k) break;
    } else if (!(r.q > selection.threshold)) {
      break;  // ranked descending; the rest are below the threshold too
    }
    const SearchTree& tree = pruned_trees[r.tree_index];
    const auto& steps = tree.state_of(r.node).steps();
    SftTrace trace;
    trace.question = steps.front().text;
    trace.steps.assign(steps.begin() + 1, steps.end());
    out.push_back(std::move(trace));
  }
  return out;
}

std::vector<QLabel> qvm_targets(const ReplayBuffer& buffer) {
  std::vector<QLabel> out;
  out.reserve(buffer.size());
  for (const ReplayEntry& e : buffer.entries()) {
    out.push_back(QLabel{e.child_state(), e.q_mcts});
  }
  return out;
}

}  // namespace rlm
