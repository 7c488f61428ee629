#ifndef RLM_CORE_TREE_HPP_
#define RLM_CORE_TREE_HPP_

#include <optional>
#include <vector>

#include "rlm/core/types.hpp"

namespace rlm {

/// Search tree over states. Node ids are dense integers in creation order,
/// so a parent id is always smaller than its children's ids. Each node holds
/// the full state; the root-to-node step path and the stored state agree by
/// construction (validate() re-checks this).
class SearchTree {
 public:
  explicit SearchTree(State root_state);

  NodeId add_child(NodeId parent, ReasoningStep step, double q, bool terminal,
                   std::optional<double> reward = std::nullopt);

  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId id) const { return id < nodes_.size(); }

  const State& state_of(NodeId id) const { return node(id).state; }
  const ReasoningStep& step_of(NodeId id) const { return node(id).state.last(); }
  std::optional<NodeId> parent(NodeId id) const { return node(id).parent; }
  const std::vector<NodeId>& children(NodeId id) const { return node(id).children; }
  bool is_leaf(NodeId id) const { return node(id).children.empty(); }
  std::size_t depth(NodeId id) const { return node(id).state.depth(); }

  NodeStats& stats(NodeId id) { return node_mut(id).stats; }
  const NodeStats& stats(NodeId id) const { return node(id).stats; }

  std::vector<NodeId> terminal_nodes() const;
  std::vector<NodeId> leaves() const;

  /// O(|N|) well-formedness check: parent links, single-step deltas between
  /// parent and child states, q bounds, terminality consistency.
  void validate() const;

 private:
  struct Node {
    explicit Node(State s) : state(std::move(s)) {}
    std::optional<NodeId> parent;
    std::vector<NodeId> children;
    State state;
    NodeStats stats;
  };

  const Node& node(NodeId id) const;
  Node& node_mut(NodeId id);

  std::vector<Node> nodes_;
};

Trajectory trajectory_of(const SearchTree& tree, NodeId node);

}  // namespace rlm

#endif  // RLM_CORE_TREE_HPP_
