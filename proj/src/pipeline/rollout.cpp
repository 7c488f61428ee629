#include "rlm/pipeline/rollout.hpp"

#include <atomic>
#include <memory>
#include <thread>
#include <utility>

#include "rlm/pipeline/advantage.hpp"
#include "rlm/search/mcts.hpp"
#include "rlm/search/transform.hpp"

namespace rlm {

std::vector<ReplayEntry> harvest_entries(const SearchTree& pruned_tree,
                                         std::uint64_t tree_id, double gamma) {
  std::vector<ReplayEntry> out;
  if (pruned_tree.size() <= 1) return out;
  const std::vector<AdvantageRecord> advantages =
      compute_advantages(pruned_tree, AdvantageOptions{gamma, false});
  out.reserve(pruned_tree.size() - 1);
  for (NodeId id = 1; id < pruned_tree.size(); ++id) {
    const NodeStats& st = pruned_tree.stats(id);
    const NodeId parent = *pruned_tree.parent(id);
    ReplayEntry e{tree_id,
                  id,
                  pruned_tree.state_of(parent),
                  pruned_tree.step_of(id),
                  st.q,
                  pruned_tree.stats(parent).q,
                  st.terminal,
                  st.reward,
                  advantages[id - 1].advantage};
    out.push_back(std::move(e));
  }
  return out;
}

RolloutReport rollout_phase(const std::vector<RolloutQuestion>& questions,
                            const SearchConfig& cfg, PolicyBackend& policy,
                            ValueBackend& value, const Verifier& verifier,
                            ReplayBuffer* buffer, int workers) {
  if (cfg.mode != SearchMode::kTraining) {
    throw InvalidConfig("rollout phase requires a training-mode config");
  }
  if (buffer == nullptr) throw InvalidConfig("rollout phase requires a replay buffer");
  if (workers < 1) workers = 1;

  struct Slot {
    QuestionReport report;
    std::unique_ptr<SearchTree> pruned;
    std::vector<ReplayEntry> entries;
  };
  std::vector<Slot> slots(questions.size());

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < questions.size(); i = next.fetch_add(1)) {
      Slot& slot = slots[i];
      slot.report.question = questions[i].question;
      try {
        SearchConfig qcfg = cfg;
        qcfg.seed = cfg.seed + i;
        MctsOutcome outcome = run_mcts(questions[i].question, qcfg, policy, value,
                                       &verifier, &questions[i].golden);
        slot.report.terminals_found = outcome.terminals_found;
        slot.report.solved = outcome.best_path && outcome.best_path->terminal &&
                             verifier.check(outcome.best_path->states.back(),
                                            questions[i].golden);
        SearchTree pruned = prune_incomplete(outcome.tree);
        slot.entries = harvest_entries(pruned, i, cfg.discount);
        slot.report.entries_added = slot.entries.size();
        slot.pruned = std::make_unique<SearchTree>(std::move(pruned));
        slot.report.ok = true;
      } catch (const Error& e) {
        slot.report.error = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(workers, static_cast<int>(questions.size()));
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  RolloutReport report;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    Slot& slot = slots[i];
    report.buffer_growth += slot.entries.size();
    if (!slot.entries.empty()) buffer->push_many(std::move(slot.entries));
    if (slot.report.ok) {
      if (slot.report.solved) report.solved += 1;
      report.pruned_trees.push_back(std::move(*slot.pruned));
    } else {
      report.failed += 1;
      report.pruned_trees.emplace_back(
          State(ReasoningStep{questions[i].question, StepMarker::kIntermediate}));
    }
    report.questions.push_back(std::move(slot.report));
  }
  if (!questions.empty() && report.failed == static_cast<int>(questions.size())) {
    throw Error("rollout phase: all questions failed (" + report.questions.front().error +
                ")");
  }
  return report;
}

}  // namespace rlm
