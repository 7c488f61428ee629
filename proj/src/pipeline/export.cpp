#include "rlm/pipeline/export.hpp"

#include <functional>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "rlm/core/serialize.hpp"

namespace rlm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void for_each_line(std::istream& is, const std::function<void(const json&)>& fn) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    fn(json::parse(line));
  }
}

std::string scheme_name(ValueScheme s) {
  return s == ValueScheme::kBinaryLikelihood ? "binary_likelihood" : "continuous_discounted";
}

ValueScheme scheme_from_name(const std::string& name) {
  if (name == "binary_likelihood") return ValueScheme::kBinaryLikelihood;
  if (name == "continuous_discounted") return ValueScheme::kContinuousDiscounted;
  throw InvalidState("unknown value scheme '" + name + "'");
}

}  // namespace

std::vector<PpoRecord> to_ppo_records(const ReplayBuffer& buffer) {
  std::vector<PpoRecord> out;
  out.reserve(buffer.size());
  for (const ReplayEntry& e : buffer.entries()) {
    out.push_back(PpoRecord{e.parent_state, e.step, e.q_mcts, e.advantage});
  }
  return out;
}

std::vector<DpoRecord> to_dpo_records(const std::vector<PreferencePair>& pairs) {
  std::vector<DpoRecord> out;
  out.reserve(pairs.size());
  for (const PreferencePair& p : pairs) {
    std::vector<ReasoningStep> prefix(p.preferred.steps().begin(),
                                      p.preferred.steps().end() - 1);
    out.push_back(DpoRecord{State::from_steps(std::move(prefix)),
                            p.preferred.steps().back(), p.rejected.steps().back(),
                            p.q_gap});
  }
  return out;
}

std::vector<QvmRecord> to_qvm_records(const ReplayBuffer& buffer) {
  std::vector<QvmRecord> out;
  out.reserve(buffer.size());
  for (const ReplayEntry& e : buffer.entries()) {
    out.push_back(QvmRecord{e.child_state(), e.q_mcts});
  }
  return out;
}

void write_ppo(std::ostream& os, const std::vector<PpoRecord>& records) {
  for (const auto& r : records) {
    os << ordered_json{{"state", state_to_json(r.state)},
                       {"step", step_to_json(r.step)},
                       {"q_mcts", r.q_mcts},
                       {"advantage", r.advantage}}
              .dump()
       << '\n';
  }
}

std::vector<PpoRecord> read_ppo(std::istream& is) {
  std::vector<PpoRecord> out;
  for_each_line(is, [&](const json& j) {
    out.push_back(PpoRecord{state_from_json(j.at("state")), step_from_json(j.at("step")),
                            j.at("q_mcts").get<double>(), j.at("advantage").get<double>()});
  });
  return out;
}

void write_dpo(std::ostream& os, const std::vector<DpoRecord>& records) {
  for (const auto& r : records) {
    os << ordered_json{{"prompt", state_to_json(r.prompt)},
                       {"chosen", step_to_json(r.chosen)},
                       {"rejected", step_to_json(r.rejected)},
                       {"q_gap", r.q_gap}}
              .dump()
       << '\n';
  }
}

std::vector<DpoRecord> read_dpo(std::istream& is) {
  std::vector<DpoRecord> out;
  for_each_line(is, [&](const json& j) {
    out.push_back(DpoRecord{state_from_json(j.at("prompt")), step_from_json(j.at("chosen")),
                            step_from_json(j.at("rejected")), j.at("q_gap").get<double>()});
  });
  return out;
}

void write_sft(std::ostream& os, const std::vector<SftExample>& records) {
  for (const auto& r : records) {
    os << ordered_json{{"prompt", r.prompt}, {"target", r.target}}.dump() << '\n';
  }
}

std::vector<SftExample> read_sft(std::istream& is) {
  std::vector<SftExample> out;
  for_each_line(is, [&](const json& j) {
    out.push_back(SftExample{j.at("prompt").get<std::string>(),
                             j.at("target").get<std::string>()});
  });
  return out;
}

void write_qvm(std::ostream& os, const std::vector<QvmRecord>& records) {
  for (const auto& r : records) {
    os << ordered_json{{"state_action", state_to_json(r.state_action)},
                       {"target", r.target}}
              .dump()
       << '\n';
  }
}

std::vector<QvmRecord> read_qvm(std::istream& is) {
  std::vector<QvmRecord> out;
  for_each_line(is, [&](const json& j) {
    out.push_back(
        QvmRecord{state_from_json(j.at("state_action")), j.at("target").get<double>()});
  });
  return out;
}

void write_value_labels(std::ostream& os, const std::vector<ValueLabel>& labels) {
  for (const auto& l : labels) {
    os << ordered_json{{"state", state_to_json(l.state)},
                       {"value", l.value},
                       {"scheme", scheme_name(l.scheme)},
                       {"n", l.n_simulations},
                       {"is_terminal_label", l.is_terminal_label}}
              .dump()
       << '\n';
  }
}

std::vector<ValueLabel> read_value_labels(std::istream& is) {
  std::vector<ValueLabel> out;
  for_each_line(is, [&](const json& j) {
    out.push_back(ValueLabel{state_from_json(j.at("state")), j.at("value").get<double>(),
                             scheme_from_name(j.at("scheme").get<std::string>()),
                             j.at("n").get<int>(), j.at("is_terminal_label").get<bool>()});
  });
  return out;
}

void write_replay_entries(std::ostream& os, const ReplayBuffer& buffer) {
  for (const ReplayEntry& e : buffer.entries()) {
    ordered_json j{{"tree_id", e.tree_id},
                   {"node_id", e.node_id},
                   {"state", state_to_json(e.parent_state)},
                   {"step", step_to_json(e.step)},
                   {"q_mcts", e.q_mcts},
                   {"q_parent", e.q_parent},
                   {"is_terminal", e.is_terminal},
                   {"reward", nullptr},
                   {"advantage", e.advantage}};
    if (e.reward) j["reward"] = *e.reward;
    os << j.dump() << '\n';
  }
}

std::vector<ReplayEntry> read_replay_entries(std::istream& is) {
  std::vector<ReplayEntry> out;
  for_each_line(is, [&](const json& j) {
    std::optional<double> reward;
    if (!j.at("reward").is_null()) reward = j.at("reward").get<double>();
    out.push_back(ReplayEntry{j.at("tree_id").get<std::uint64_t>(),
                              j.at("node_id").get<NodeId>(),
                              state_from_json(j.at("state")), step_from_json(j.at("step")),
                              j.at("q_mcts").get<double>(), j.at("q_parent").get<double>(),
                              j.at("is_terminal").get<bool>(), reward,
                              j.at("advantage").get<double>()});
  });
  return out;
}

}  // namespace rlm
