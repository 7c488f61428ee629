#ifndef RLM_TESTS_SUPPORT_ORACLES_HPP_
#define RLM_TESTS_SUPPORT_ORACLES_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "rlm/backends/synthetic.hpp"
#include "rlm/core/tree.hpp"

namespace rlm::testing {

// Independent bottom-up recomputation of internal q values as the
// visit-weighted average of children (alpha = 1), discounted by gamma.
// Leaves keep their stored q. Works because children always have larger ids.
inline std::vector<double> bottom_up_q(const SearchTree& tree, double gamma) {
  std::vector<double> q(tree.size());
  for (NodeId id = static_cast<NodeId>(tree.size()); id-- > 0;) {
    const auto& kids = tree.children(id);
    if (kids.empty()) {
      q[id] = tree.stats(id).q;
      continue;
    }
    double visits = 0.0;
    double acc = 0.0;
    for (NodeId c : kids) {
      visits += static_cast<double>(tree.stats(c).visits);
      acc += static_cast<double>(tree.stats(c).visits) * q[c];
    }
    q[id] = gamma * acc / visits;
  }
  return q;
}

// Longhand per-level argmax of the selection score, written independently of
// the library implementation.
inline NodeId brute_force_descend(const SearchTree& tree, double c1, double c2) {
  NodeId node = tree.root();
  while (!tree.is_leaf(node)) {
    const double np = static_cast<double>(tree.stats(node).visits);
    NodeId best = tree.children(node).front();
    double best_score = -1e300;
    for (NodeId c : tree.children(node)) {
      const double nc = static_cast<double>(tree.stats(c).visits);
      double explore = 0.0;
      if (np > 1.0) explore = std::sqrt(np - 1.0) / (1.0 + nc);
      const double score =
          tree.stats(c).q + explore * (c1 + std::log((np + c2) / c2));
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    node = best;
  }
  return node;
}

// Exhaustive q estimate for the transition into `child`, enumerating
// trajectories explicitly with depths counted from the parent; the second
// route of the q/V equivalence check.
inline double enumerated_q(const SyntheticEnv& env, const State& child, double gamma) {
  if (child.terminal()) {
    return extract_answer(child) == env.golden() ? 1.0 : -1.0;
  }
  struct Walker {
    const SyntheticEnv& env;
    double gamma;
    double sum = 0.0;
    long count = 0;
    void walk(const State& s, int steps_from_parent) {
      if (s.terminal()) {
        const bool ok = extract_answer(s) == env.golden();
        sum += std::pow(gamma, steps_from_parent) * (ok ? 1.0 : -1.0);
        count += 1;
        return;
      }
      for (const auto& step : env.candidates(s)) {
        walk(s.append(step), steps_from_parent + 1);
      }
    }
  } walker{env, gamma};
  walker.walk(child, 1);  // the step into the child counts as one
  return walker.sum / static_cast<double>(walker.count);
}

// Random tree whose leaves are all terminal with rewards in {-1, +1};
// internal q values start arbitrary, visit counts are randomized.
inline SearchTree random_terminal_tree(std::mt19937_64& rng, int max_nodes) {
  State root(ReasoningStep{"question", StepMarker::kIntermediate});
  SearchTree tree(std::move(root));
  std::uniform_int_distribution<int> n_children(1, 3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> visits(1, 9);
  std::uniform_int_distribution<int> coin(0, 1);

  std::vector<NodeId> open{tree.root()};
  int budget = max_nodes - 1;
  int next_label = 0;
  while (!open.empty() && budget > 0) {
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const std::size_t at = pick(rng);
    const NodeId node = open[at];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(at));
    const int kids = std::min(n_children(rng), budget);
    for (int k = 0; k < kids; ++k) {
      const NodeId id = tree.add_child(
          node, ReasoningStep{"s" + std::to_string(next_label++), StepMarker::kIntermediate},
          unit(rng), false);
      tree.stats(id).visits = static_cast<std::uint32_t>(visits(rng));
      open.push_back(id);
      budget -= 1;
    }
  }
  // every remaining leaf becomes terminal with a +-1 reward
  SearchTree out(tree.state_of(tree.root()));
  out.stats(out.root()) = tree.stats(tree.root());
  std::vector<NodeId> remap(tree.size());
  remap[0] = out.root();
  for (NodeId id = 1; id < tree.size(); ++id) {
    const bool leaf = tree.is_leaf(id);
    const double reward = coin(rng) == 1 ? 1.0 : -1.0;
    ReasoningStep step = tree.step_of(id);
    if (leaf) step.marker = StepMarker::kFinal;
    const NodeId nid = out.add_child(remap[*tree.parent(id)], step,
                                     leaf ? reward : tree.stats(id).q, leaf,
                                     leaf ? std::optional<double>(reward) : std::nullopt);
    out.stats(nid).visits = tree.stats(id).visits;
    remap[id] = nid;
  }
  return out;
}

}  // namespace rlm::testing

#endif  // RLM_TESTS_SUPPORT_ORACLES_HPP_
