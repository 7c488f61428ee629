#include "rlm/backends/wire.hpp"

#include "rlm/core/serialize.hpp"

namespace rlm {

using nlohmann::json;
using nlohmann::ordered_json;

nlohmann::ordered_json wire_generate_request(const std::vector<State>& states, int m,
                                             double temperature) {
  ordered_json arr = ordered_json::array();
  for (const State& s : states) arr.push_back(state_to_json(s));
  return ordered_json{{"states", arr}, {"m", m}, {"temperature", temperature}};
}

nlohmann::ordered_json wire_score_request(const std::vector<State>& states) {
  ordered_json arr = ordered_json::array();
  for (const State& s : states) arr.push_back(state_to_json(s));
  return ordered_json{{"states", arr}};
}

std::vector<State> wire_parse_states(const json& body) {
  if (!body.contains("states") || !body.at("states").is_array()) {
    throw MalformedResponse("request body lacks a states array");
  }
  std::vector<State> out;
  out.reserve(body.at("states").size());
  for (const auto& s : body.at("states")) out.push_back(state_from_json(s));
  return out;
}

std::vector<std::vector<ReasoningStep>> wire_parse_candidates(const json& body,
                                                              std::size_t n_states) {
  if (!body.contains("candidates") || !body.at("candidates").is_array()) {
    throw MalformedResponse("response lacks a candidates array");
  }
  const json& cands = body.at("candidates");
  if (cands.size() != n_states) {
    throw MalformedResponse("got candidates for " + std::to_string(cands.size()) +
                            " states, expected " + std::to_string(n_states));
  }
  std::vector<std::vector<ReasoningStep>> out;
  out.reserve(n_states);
  for (const auto& per_state : cands) {
    if (!per_state.is_array()) throw MalformedResponse("per-state candidates must be arrays");
    std::vector<ReasoningStep> steps;
    steps.reserve(per_state.size());
    for (const auto& s : per_state) {
      try {
        steps.push_back(step_from_json(s));
      } catch (const Error& e) {
        throw MalformedResponse(std::string("bad candidate step: ") + e.what());
      }
    }
    out.push_back(std::move(steps));
  }
  return out;
}

std::vector<double> wire_parse_scores(const json& body, std::size_t n_states) {
  if (!body.contains("q") || !body.at("q").is_array()) {
    throw MalformedResponse("response lacks a q array");
  }
  const json& q = body.at("q");
  if (q.size() != n_states) {
    throw MalformedResponse("got " + std::to_string(q.size()) + " scores for " +
                            std::to_string(n_states) + " states");
  }
  std::vector<double> out;
  out.reserve(n_states);
  for (const auto& v : q) {
    if (!v.is_number()) throw MalformedResponse("q values must be numbers");
    const double d = v.get<double>();
    if (d < -1.0 || d > 1.0) throw MalformedResponse("q value outside [-1, 1]");
    out.push_back(d);
  }
  return out;
}

}  // namespace rlm
