#include "rlm/core/tree.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace rlm {

SearchTree::SearchTree(State root_state) {
  Node root(std::move(root_state));
  root.stats.terminal = root.state.terminal();
  nodes_.push_back(std::move(root));
}

const SearchTree::Node& SearchTree::node(NodeId id) const {
  if (id >= nodes_.size()) throw UnknownNode("unknown node id " + std::to_string(id));
  return nodes_[id];
}

SearchTree::Node& SearchTree::node_mut(NodeId id) {
  if (id >= nodes_.size()) throw UnknownNode("unknown node id " + std::to_string(id));
  return nodes_[id];
}

NodeId SearchTree::add_child(NodeId parent, ReasoningStep step, double q, bool terminal,
                             std::optional<double> reward) {
  Node& p = node_mut(parent);
  if (!(q >= -1.0 && q <= 1.0)) throw InvalidState("node q must lie in [-1, 1]");
  if (reward && !terminal) throw InvalidState("reward is only valid on terminal nodes");
  if (reward && *reward != 1.0 && *reward != -1.0) {
    throw InvalidState("terminal reward must be +1 or -1");
  }

  Node child(p.state.append(std::move(step)));
  child.parent = parent;
  if (terminal != child.state.terminal()) {
    throw InvalidState("terminality flag must mirror the final step marker");
  }
  child.stats.visits = 1;
  child.stats.q = q;
  child.stats.terminal = terminal;
  child.stats.reward = reward;

  const NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(child));
  nodes_[parent].children.push_back(id);
  return id;
}

std::vector<NodeId> SearchTree::terminal_nodes() const {
  std::vector<NodeId> out;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].stats.terminal) out.push_back(id);
  }
  return out;
}

std::vector<NodeId> SearchTree::leaves() const {
  std::vector<NodeId> out;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].children.empty()) out.push_back(id);
  }
  return out;
}

void SearchTree::validate() const {
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (id == 0) {
      if (n.parent) throw InvalidState("root must not have a parent");
    } else {
      if (!n.parent) throw InvalidState("non-root node without a parent");
      if (*n.parent >= id) throw InvalidState("parent id must precede child id");
      const Node& p = nodes_[*n.parent];
      // child state = parent state + exactly one step
      if (n.state.steps().size() != p.state.steps().size() + 1) {
        throw InvalidState("child state must extend the parent by one step");
      }
      for (std::size_t i = 0; i < p.state.steps().size(); ++i) {
        if (!(p.state.steps()[i] == n.state.steps()[i])) {
          throw InvalidState("child state does not share the parent prefix");
        }
      }
    }
    if (!(n.stats.q >= -1.0 && n.stats.q <= 1.0) || std::isnan(n.stats.q)) {
      throw InvalidState("node q out of [-1, 1]");
    }
    if (n.stats.terminal != n.state.terminal()) {
      throw InvalidState("terminality flag inconsistent with state");
    }
    if (n.stats.reward && !n.stats.terminal) {
      throw InvalidState("reward set on a non-terminal node");
    }
    if (n.stats.reward && *n.stats.reward != 1.0 && *n.stats.reward != -1.0) {
      throw InvalidState("terminal reward must be +1 or -1");
    }
    for (NodeId c : n.children) {
      if (c >= nodes_.size() || !nodes_[c].parent || *nodes_[c].parent != id) {
        throw InvalidState("child link mismatch");
      }
    }
  }
}

Trajectory trajectory_of(const SearchTree& tree, NodeId node) {
  if (!tree.contains(node)) throw UnknownNode("unknown node id " + std::to_string(node));
  std::vector<NodeId> path;
  for (std::optional<NodeId> cur = node; cur; cur = tree.parent(*cur)) {
    path.push_back(*cur);
  }
  Trajectory t;
  t.states.reserve(path.size());
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    t.states.push_back(tree.state_of(*it));
  }
  t.terminal = tree.stats(node).terminal;
  t.terminal_reward = tree.stats(node).reward;
  return t;
}

}  // namespace rlm
