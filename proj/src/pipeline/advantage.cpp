#include "rlm/pipeline/advantage.hpp"

#include <string>

namespace rlm {

std::vector<AdvantageRecord> compute_advantages(const SearchTree& pruned_tree,
                                                const AdvantageOptions& options) {
  if (!(options.gamma > 0.0) || options.gamma > 1.0) {
    throw InvalidConfig("gamma must lie in (0, 1]");
  }
  for (NodeId leaf : pruned_tree.leaves()) {
    if (leaf == pruned_tree.root() && pruned_tree.size() == 1) break;  // root-only tree
    const NodeStats& st = pruned_tree.stats(leaf);
    if (!st.terminal) {
      throw InvalidState("advantage computation requires a pruned tree (non-terminal leaf " +
                         std::to_string(leaf) + ")");
    }
    if (!st.reward) {
      throw MissingReward("terminal node " + std::to_string(leaf) + " has no reward");
    }
  }

  std::vector<AdvantageRecord> out;
  out.reserve(pruned_tree.size() > 0 ? pruned_tree.size() - 1 : 0);
  const double g = options.gamma;
  for (NodeId id = 1; id < pruned_tree.size(); ++id) {
    const NodeStats& st = pruned_tree.stats(id);
    const NodeStats& parent = pruned_tree.stats(*pruned_tree.parent(id));
    AdvantageRecord rec;
    rec.node_id = id;
    rec.v_next = (st.terminal && options.zero_v_next_at_terminal) ? 0.0 : st.q / g;
    rec.v_curr = parent.q / g;
    rec.reward_term = st.terminal ? *st.reward : 0.0;
    rec.advantage = rec.reward_term + g * rec.v_next - rec.v_curr;
    out.push_back(rec);
  }
  return out;
}

}  // namespace rlm
