#ifndef RLM_PIPELINE_EXPORT_HPP_
#define RLM_PIPELINE_EXPORT_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "rlm/labeling/labels.hpp"
#include "rlm/labeling/sft.hpp"
#include "rlm/pipeline/replay.hpp"
#include "rlm/pipeline/selection.hpp"

namespace rlm {

struct PpoRecord {
  State state;
  ReasoningStep step;
  double q_mcts = 0.0;
  double advantage = 0.0;
};

struct DpoRecord {
  State prompt;  // shared parent state
  ReasoningStep chosen;
  ReasoningStep rejected;
  double q_gap = 0.0;
};

struct QvmRecord {
  State state_action;
  double target = 0.0;
};

std::vector<PpoRecord> to_ppo_records(const ReplayBuffer& buffer);
std::vector<DpoRecord> to_dpo_records(const std::vector<PreferencePair>& pairs);
std::vector<QvmRecord> to_qvm_records(const ReplayBuffer& buffer);

// Newline-delimited JSON, one record per line.
void write_ppo(std::ostream& os, const std::vector<PpoRecord>& records);
void write_dpo(std::ostream& os, const std::vector<DpoRecord>& records);
void write_sft(std::ostream& os, const std::vector<SftExample>& records);
void write_qvm(std::ostream& os, const std::vector<QvmRecord>& records);
void write_value_labels(std::ostream& os, const std::vector<ValueLabel>& labels);

std::vector<PpoRecord> read_ppo(std::istream& is);
std::vector<DpoRecord> read_dpo(std::istream& is);
std::vector<SftExample> read_sft(std::istream& is);
std::vector<QvmRecord> read_qvm(std::istream& is);
std::vector<ValueLabel> read_value_labels(std::istream& is);

void write_replay_entries(std::ostream& os, const ReplayBuffer& buffer);
std::vector<ReplayEntry> read_replay_entries(std::istream& is);

}  // namespace rlm

#endif  // RLM_PIPELINE_EXPORT_HPP_
