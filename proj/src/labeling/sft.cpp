#include "rlm/labeling/sft.hpp"

#include <utility>

#include "rlm/errors.hpp"

namespace rlm {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<ReasoningStep> split_cot_to_steps(const std::string& completion) {
  if (completion.empty()) throw EmptyCompletion("completion is empty");
  std::vector<std::string> segments;
  std::size_t pos = 0;
  while (pos <= completion.size()) {
    const std::size_t next = completion.find("\n\n", pos);
    const std::string seg = next == std::string::npos
                                ? completion.substr(pos)
                                : completion.substr(pos, next - pos);
    const std::string t = trim(seg);
    if (!t.empty()) segments.push_back(t);
    if (next == std::string::npos) break;
    pos = next + 2;
  }
  if (segments.empty()) throw EmptyCompletion("completion has no non-empty segments");

  std::vector<ReasoningStep> steps;
  steps.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    steps.push_back(ReasoningStep{std::move(segments[i]),
                                  i + 1 == segments.size() ? StepMarker::kFinal
                                                           : StepMarker::kIntermediate});
  }
  return steps;
}

std::string sft_target(const std::vector<ReasoningStep>& steps, const SftMarkers& markers) {
  if (steps.empty()) throw NonTerminalTrace("trace has no steps");
  if (steps.back().marker != StepMarker::kFinal) {
    throw NonTerminalTrace("trace does not end in a final step");
  }
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) {
      out += markers.eois;
      if (markers.insert_assistant) out += markers.assistant;
    }
    out += steps[i].text;
  }
  out += markers.eos;
  return out;
}

std::vector<SftExample> build_sft_dataset(const std::vector<SftTrace>& traces,
                                          const SftMarkers& markers) {
  std::vector<SftExample> out;
  out.reserve(traces.size());
  for (const SftTrace& t : traces) {
    out.push_back(SftExample{t.question, sft_target(t.steps, markers)});
  }
  return out;
}

std::vector<std::string> split_sft_target(const std::string& target,
                                          const SftMarkers& markers) {
  if (target.size() < markers.eos.size() ||
      target.compare(target.size() - markers.eos.size(), markers.eos.size(), markers.eos) !=
          0) {
    throw Error("sft target does not end with the eos marker");
  }
  const std::string body = target.substr(0, target.size() - markers.eos.size());
  if (body.find(markers.eos) != std::string::npos) {
    throw Error("sft target contains more than one eos marker");
  }
  const std::string sep =
      markers.insert_assistant ? markers.eois + markers.assistant : markers.eois;
  std::vector<std::string> steps;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = body.find(sep, pos);
    const std::string part =
        next == std::string::npos ? body.substr(pos) : body.substr(pos, next - pos);
    if (part.empty()) throw Error("sft target contains an empty step");
    if (part.find(markers.eois) != std::string::npos ||
        (markers.insert_assistant && part.find(markers.assistant) != std::string::npos)) {
      throw Error("sft target step contains a stray marker");
    }
    steps.push_back(part);
    if (next == std::string::npos) break;
    pos = next + sep.size();
  }
  return steps;
}

bool sft_target_well_formed(const std::string& target, const SftMarkers& markers) {
  try {
    return !split_sft_target(target, markers).empty();
  } catch (const Error&) {
    return false;
  }
}

}  // namespace rlm
