#ifndef RLM_LABELING_SFT_HPP_
#define RLM_LABELING_SFT_HPP_

#include <string>
#include <vector>

#include "rlm/core/types.hpp"

namespace rlm {

struct SftMarkers {
  std::string eois = "⟨eois⟩";
  std::string assistant = "⟨assistant⟩";
  std::string eos = "⟨eos⟩";
  bool insert_assistant = true;  // helps some base models; configurable
};

struct SftExample {
  std::string prompt;
  std::string target;
};

/// A completed reasoning trace: the question plus steps z_1..z_{T+1}
/// (excluding the query), the last of which must be final.
struct SftTrace {
  std::string question;
  std::vector<ReasoningStep> steps;
};

/// Splits a raw chain-of-thought completion on blank-line boundaries
/// ("\n\n"), trims segments, drops empty ones, and marks the last final.
std::vector<ReasoningStep> split_cot_to_steps(const std::string& completion);

/// Target = z_1 <eois><assistant> z_2 ... z_{T+1} <eos> (assistant marker
/// optional via markers.insert_assistant).
std::string sft_target(const std::vector<ReasoningStep>& steps, const SftMarkers& markers = {});

std::vector<SftExample> build_sft_dataset(const std::vector<SftTrace>& traces,
                                          const SftMarkers& markers = {});

/// Inverse of sft_target: the step texts, in order. Throws on malformed input.
std::vector<std::string> split_sft_target(const std::string& target,
                                          const SftMarkers& markers = {});

/// Whether `target` matches step (<eois><assistant> step)* <eos> with
/// non-empty, marker-free steps.
bool sft_target_well_formed(const std::string& target, const SftMarkers& markers = {});

}  // namespace rlm

#endif  // RLM_LABELING_SFT_HPP_
