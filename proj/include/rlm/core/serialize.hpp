#ifndef RLM_CORE_SERIALIZE_HPP_
#define RLM_CORE_SERIALIZE_HPP_

#include <string>
#include <utility>

#include <json.hpp>

#include "rlm/core/tree.hpp"
#include "rlm/core/types.hpp"

namespace rlm {

std::string marker_name(StepMarker m);
StepMarker marker_from_name(const std::string& name);

nlohmann::ordered_json step_to_json(const ReasoningStep& step);
ReasoningStep step_from_json(const nlohmann::json& j);

nlohmann::ordered_json state_to_json(const State& state);
State state_from_json(const nlohmann::json& j);

nlohmann::ordered_json config_to_json(const SearchConfig& cfg);
SearchConfig config_from_json(const nlohmann::json& j);

// Versioned tree document: {version, config, root, nodes:[{id, parent,
// step:{text, marker}, N, q, beta, r}]}. Nodes are emitted in id order.
nlohmann::ordered_json tree_to_json(const SearchTree& tree, const SearchConfig& cfg);
std::pair<SearchTree, SearchConfig> tree_from_json(const nlohmann::json& doc);

std::string tree_to_string(const SearchTree& tree, const SearchConfig& cfg);
std::pair<SearchTree, SearchConfig> tree_from_string(const std::string& text);

}  // namespace rlm

#endif  // RLM_CORE_SERIALIZE_HPP_
