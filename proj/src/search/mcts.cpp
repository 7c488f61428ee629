#include "rlm/search/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace rlm {

double puct_score(const NodeStats& parent, const NodeStats& child, double c1, double c2) {
  const double n = static_cast<double>(parent.visits);
  const double exploration = std::sqrt(std::max(n - 1.0, 0.0)) /
                             (1.0 + static_cast<double>(child.visits));
  return child.q + exploration * (c1 + std::log((n + c2) / c2));
}

NodeId select_leaf(const SearchTree& tree, double c1, double c2, std::mt19937_64& rng) {
  NodeId node = tree.root();
  std::vector<NodeId> ties;
  while (!tree.is_leaf(node)) {
    const NodeStats& parent = tree.stats(node);
    double best = -std::numeric_limits<double>::infinity();
    ties.clear();
    for (NodeId c : tree.children(node)) {
      const double score = puct_score(parent, tree.stats(c), c1, c2);
      if (score > best) {
        best = score;
        ties.assign(1, c);
      } else if (score == best) {
        ties.push_back(c);
      }
    }
    if (ties.size() == 1) {
      node = ties.front();
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
      node = ties[pick(rng)];
    }
  }
  return node;
}

std::vector<NodeId> expand(SearchTree& tree, NodeId leaf, PolicyBackend& policy,
                           ValueBackend& value, const SearchConfig& cfg,
                           const Verifier* verifier, const std::string* golden,
                           const DiversityParams& params, MctsStats* stats) {
  if (!tree.contains(leaf)) throw UnknownNode("expand: unknown node");
  if (!tree.is_leaf(leaf)) throw ExpandNonLeaf("expand: node already has children");
  if (tree.stats(leaf).terminal) throw ExpandTerminal("expand: node is terminal");
  if (tree.depth(leaf) >= static_cast<std::size_t>(cfg.max_depth)) {
    throw DepthExceeded("expand: node is at max depth");
  }
  const bool training = cfg.mode == SearchMode::kTraining;
  if (training && (verifier == nullptr || golden == nullptr)) {
    throw InvalidConfig("training mode requires a verifier and a golden answer");
  }

  const State& base = tree.state_of(leaf);
  std::vector<ReasoningStep> candidates =
      policy.generate(base, cfg.children_per_expansion, params);

  // identical siblings would corrupt the visit-weighted averages
  std::vector<ReasoningStep> unique;
  for (auto& cand : candidates) {
    const bool dup = std::any_of(unique.begin(), unique.end(),
                                 [&](const ReasoningStep& u) { return u == cand; });
    if (dup) {
      if (stats) stats->duplicates_dropped += 1;
      continue;
    }
    unique.push_back(std::move(cand));
  }
  if (unique.empty()) return {};

  std::vector<State> child_states;
  child_states.reserve(unique.size());
  for (const auto& step : unique) child_states.push_back(base.append(step));

  std::vector<double> scores = value.score(child_states);
  if (scores.size() != child_states.size()) {
    throw MalformedResponse("value backend returned " + std::to_string(scores.size()) +
                            " scores for " + std::to_string(child_states.size()) + " states");
  }

  std::vector<NodeId> ids;
  ids.reserve(unique.size());
  for (std::size_t i = 0; i < unique.size(); ++i) {
    const bool terminal = unique[i].marker == StepMarker::kFinal;
    double q = scores[i];
    std::optional<double> reward;
    if (terminal && training) {
      reward = verifier->check(child_states[i], *golden) ? 1.0 : -1.0;
      q = *reward;  // overwrite by true reward
    }
    ids.push_back(tree.add_child(leaf, unique[i], q, terminal, reward));
  }
  return ids;
}

void backpropagate(SearchTree& tree, NodeId from, double alpha, double gamma) {
  if (!tree.contains(from)) throw UnknownNode("backpropagate: unknown node");
  for (std::optional<NodeId> up = tree.parent(from); up; up = tree.parent(*up)) {
    NodeStats& st = tree.stats(*up);
    st.visits += 1;
    double visit_sum = 0.0;
    double weighted = 0.0;
    for (NodeId c : tree.children(*up)) {
      const NodeStats& cs = tree.stats(c);
      visit_sum += static_cast<double>(cs.visits);
      weighted += static_cast<double>(cs.visits) * cs.q;
    }
    if (visit_sum > 0.0) {
      st.q = (1.0 - alpha) * st.q + alpha * gamma * (weighted / visit_sum);
    }
  }
}

namespace {

void select_best_path(MctsOutcome* out) {
  const SearchTree& tree = out->tree;
  std::optional<NodeId> best;
  for (NodeId id : tree.terminal_nodes()) {
    if (!best || tree.stats(id).q > tree.stats(*best).q) best = id;  // earliest id wins ties
  }
  bool terminal = best.has_value();
  if (!best) {
    for (NodeId id : tree.leaves()) {
      if (!best || tree.stats(id).q > tree.stats(*best).q) best = id;
    }
    // nothing beyond an unexpanded root: report no path at all
    if (best && *best == tree.root() && tree.size() == 1) best.reset();
  }
  if (best) {
    out->best_node = *best;
    out->best_path = trajectory_of(tree, *best);
    out->best_path->terminal = terminal && tree.stats(*best).terminal;
  }
}

}  // namespace

MctsOutcome run_mcts(State root_state, const SearchConfig& cfg, PolicyBackend& policy,
                     ValueBackend& value, const Verifier* verifier, const std::string* golden,
                     const DiversityParams& params) {
  cfg.validate();
  if (cfg.mode == SearchMode::kTraining && (verifier == nullptr || golden == nullptr)) {
    throw InvalidConfig("training mode requires a verifier and a golden answer");
  }

  MctsOutcome out(SearchTree(std::move(root_state)));
  std::mt19937_64 rng(cfg.seed);

  if (out.tree.stats(out.tree.root()).terminal) {
    out.terminals_found = 1;
    out.best_node = out.tree.root();
    out.best_path = trajectory_of(out.tree, out.tree.root());
    return out;
  }

  const int hard_cap = cfg.extend_until_terminal ? 2 * cfg.iterations : cfg.iterations;
  int i = 0;
  while (i < hard_cap) {
    if (i >= cfg.iterations && out.terminals_found > 0) break;
    ++i;
    const NodeId leaf = select_leaf(out.tree, cfg.c1, cfg.c2, rng);

    if (out.tree.stats(leaf).terminal) {
      // revisit: count it and push its (fixed) q up the path
      out.tree.stats(leaf).visits += 1;
      backpropagate(out.tree, leaf, cfg.backprop_weight, cfg.discount);
      out.stats.terminal_revisits += 1;
      continue;
    }
    if (out.tree.depth(leaf) >= static_cast<std::size_t>(cfg.max_depth)) {
      out.tree.stats(leaf).visits += 1;
      backpropagate(out.tree, leaf, cfg.backprop_weight, cfg.discount);
      out.stats.depth_capped_hits += 1;
      continue;
    }

    try {
      std::vector<NodeId> kids =
          expand(out.tree, leaf, policy, value, cfg, verifier, golden, params, &out.stats);
      if (kids.empty()) {
        out.errors.push_back("expansion produced no candidates at node " +
                             std::to_string(leaf));
        continue;
      }
      out.stats.expansions += 1;
      for (NodeId k : kids) {
        if (out.tree.stats(k).terminal) out.terminals_found += 1;
      }
      backpropagate(out.tree, kids.front(), cfg.backprop_weight, cfg.discount);
    } catch (const BackendFailure& e) {
      out.errors.push_back(e.what());
    }
  }
  out.iterations_run = i;
  select_best_path(&out);
  return out;
}

MctsOutcome run_mcts(const std::string& question, const SearchConfig& cfg,
                     PolicyBackend& policy, ValueBackend& value, const Verifier* verifier,
                     const std::string* golden, const DiversityParams& params) {
  return run_mcts(State(ReasoningStep{question, StepMarker::kIntermediate}), cfg, policy,
                  value, verifier, golden, params);
}

}  // namespace rlm
