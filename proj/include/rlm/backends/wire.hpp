#ifndef RLM_BACKENDS_WIRE_HPP_
#define RLM_BACKENDS_WIRE_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "rlm/core/types.hpp"

namespace rlm {

// Backend wire protocol, version 1 (header x-rlm-proto). JSON bodies:
//   POST /v1/policy/generate  {states:[[{text,marker}...]...], m, temperature}
//                          -> {candidates:[[{text,marker}...]...]}  (per state)
//   POST /v1/value/score      {states:[[...]...]} -> {q:[real...]}  (in [-1,1])
//   GET  /healthz             -> 200
inline constexpr const char* kProtoHeader = "x-rlm-proto";
inline constexpr const char* kProtoVersion = "1";
inline constexpr const char* kGeneratePath = "/v1/policy/generate";
inline constexpr const char* kScorePath = "/v1/value/score";
inline constexpr const char* kHealthPath = "/healthz";

nlohmann::ordered_json wire_generate_request(const std::vector<State>& states, int m,
                                             double temperature);
nlohmann::ordered_json wire_score_request(const std::vector<State>& states);

std::vector<State> wire_parse_states(const nlohmann::json& body);

/// Parses {candidates:[...]} aligned to n_states; MalformedResponse on any
/// schema violation.
std::vector<std::vector<ReasoningStep>> wire_parse_candidates(const nlohmann::json& body,
                                                              std::size_t n_states);

/// Parses {q:[...]} aligned to n_states with every value in [-1, 1].
std::vector<double> wire_parse_scores(const nlohmann::json& body, std::size_t n_states);

}  // namespace rlm

#endif  // RLM_BACKENDS_WIRE_HPP_
