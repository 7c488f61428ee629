#include "rlm/core/serialize.hpp"

#include <utility>
#include <vector>

namespace rlm {

using nlohmann::json;
using nlohmann::ordered_json;

std::string marker_name(StepMarker m) {
  return m == StepMarker::kFinal ? "final" : "intermediate";
}

StepMarker marker_from_name(const std::string& name) {
  if (name == "final") return StepMarker::kFinal;
  if (name == "intermediate") return StepMarker::kIntermediate;
  throw InvalidState("unknown step marker '" + name + "'");
}

ordered_json step_to_json(const ReasoningStep& step) {
  return ordered_json{{"text", step.text}, {"marker", marker_name(step.marker)}};
}

ReasoningStep step_from_json(const json& j) {
  if (!j.is_object() || !j.contains("text") || !j.contains("marker")) {
    throw InvalidState("step object requires text and marker");
  }
  return ReasoningStep{j.at("text").get<std::string>(),
                       marker_from_name(j.at("marker").get<std::string>())};
}

ordered_json state_to_json(const State& state) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : state.steps()) arr.push_back(step_to_json(s));
  return arr;
}

State state_from_json(const json& j) {
  if (!j.is_array()) throw InvalidState("state must be an array of steps");
  std::vector<ReasoningStep> steps;
  steps.reserve(j.size());
  for (const auto& e : j) steps.push_back(step_from_json(e));
  return State::from_steps(std::move(steps));
}

ordered_json config_to_json(const SearchConfig& cfg) {
  return ordered_json{
      {"iterations", cfg.iterations},
      {"children_per_expansion", cfg.children_per_expansion},
      {"c1", cfg.c1},
      {"c2", cfg.c2},
      {"backprop_weight", cfg.backprop_weight},
      {"discount", cfg.discount},
      {"mode", cfg.mode == SearchMode::kTraining ? "training" : "inference"},
      {"max_depth", cfg.max_depth},
      {"seed", cfg.seed},
      {"extend_until_terminal", cfg.extend_until_terminal},
  };
}

SearchConfig config_from_json(const json& j) {
  SearchConfig cfg;
  cfg.iterations = j.value("iterations", cfg.iterations);
  cfg.children_per_expansion = j.value("children_per_expansion", cfg.children_per_expansion);
  cfg.c1 = j.value("c1", cfg.c1);
  cfg.c2 = j.value("c2", cfg.c2);
  cfg.backprop_weight = j.value("backprop_weight", cfg.backprop_weight);
  cfg.discount = j.value("discount", cfg.discount);
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "training") {
      cfg.mode = SearchMode::kTraining;
    } else if (mode == "inference") {
      cfg.mode = SearchMode::kInference;
    } else {
      throw InvalidConfig("unknown search mode '" + mode + "'");
    }
  }
  cfg.max_depth = j.value("max_depth", cfg.max_depth);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.extend_until_terminal = j.value("extend_until_terminal", cfg.extend_until_terminal);
  cfg.validate();
  return cfg;
}

ordered_json tree_to_json(const SearchTree& tree, const SearchConfig& cfg) {
  ordered_json nodes = ordered_json::array();
  for (NodeId id = 0; id < tree.size(); ++id) {
    const NodeStats& st = tree.stats(id);
    ordered_json n{
        {"id", id},
        {"parent", nullptr},
        {"step", step_to_json(tree.step_of(id))},
        {"N", st.visits},
        {"q", st.q},
        {"beta", st.terminal},
        {"r", nullptr},
    };
    if (auto p = tree.parent(id)) n["parent"] = *p;
    if (st.reward) n["r"] = *st.reward;
    nodes.push_back(std::move(n));
  }
  return ordered_json{
      {"version", 1}, {"config", config_to_json(cfg)}, {"root", tree.root()}, {"nodes", nodes}};
}

std::pair<SearchTree, SearchConfig> tree_from_json(const json& doc) {
  if (doc.value("version", 0) != 1) throw InvalidState("unsupported tree document version");
  SearchConfig cfg = config_from_json(doc.at("config"));
  const json& nodes = doc.at("nodes");
  if (!nodes.is_array() || nodes.empty()) throw InvalidState("tree document has no nodes");

  const json& rootj = nodes.at(0);
  if (!rootj.at("parent").is_null()) throw InvalidState("first node must be the root");
  SearchTree tree(State(step_from_json(rootj.at("step"))));
  {
    NodeStats& st = tree.stats(tree.root());
    st.visits = rootj.at("N").get<std::uint32_t>();
    st.q = rootj.at("q").get<double>();
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const json& n = nodes.at(i);
    if (n.at("id").get<NodeId>() != i) throw InvalidState("node ids must be dense and ordered");
    std::optional<double> reward;
    if (!n.at("r").is_null()) reward = n.at("r").get<double>();
    const NodeId id =
        tree.add_child(n.at("parent").get<NodeId>(), step_from_json(n.at("step")),
                       n.at("q").get<double>(), n.at("beta").get<bool>(), reward);
    tree.stats(id).visits = n.at("N").get<std::uint32_t>();
  }
  tree.validate();
  return {std::move(tree), cfg};
}

std::string tree_to_string(const SearchTree& tree, const SearchConfig& cfg) {
  return tree_to_json(tree, cfg).dump(2) + "\n";
}

std::pair<SearchTree, SearchConfig> tree_from_string(const std::string& text) {
  return tree_from_json(json::parse(text));
}

}  // namespace rlm
