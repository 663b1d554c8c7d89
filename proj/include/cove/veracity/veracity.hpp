#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cove/core/config.hpp"
#include "cove/gateway/providers.hpp"
#include "cove/prompts/prompts.hpp"

namespace cove::veracity {

struct RawVerdict {
    RawLabel value = RawLabel::Unknown;
    std::string reasoning;
    std::vector<std::string> warnings;
};

/// The five answer choices as shown to the model.
std::string_view choice_text(RawLabel r);

/// Seven "item: value" lines; Unknown items read "unknown", people are comma-joined.
std::string render_context_block(const ContextSummary& context);

gateway::ChatPrompt build_veracity_prompt(const prompts::PromptLibrary& library, const std::string& context_block,
                                          const std::string& caption, bool with_web_captions);

/// Reads the choice after the last "Answer:"; reasoning is the text before it.
RawVerdict parse_verdict(std::string_view completion);

/// Most frequent label; none when empty or tied.
std::optional<VeracityLabel> majority_label(const std::vector<VeracityLabel>& labels);

/// Accurate/OOC pass through, leaning labels resolve to their side, Unknown
/// takes the majority (OOC when there is none).
VeracityVerdict map_verdict(const RawVerdict& raw, std::optional<VeracityLabel> majority);

/// Label an instance would get if its verdict were final now (Unknown excluded).
std::optional<VeracityLabel> decided_label(RawLabel r);

/// First model pass: raw verdict from the generative or classifier backend.
RawVerdict predict_raw(gateway::Providers& providers, const prompts::PromptLibrary& library,
                       const std::string& context_block, const std::string& caption, bool with_web_captions,
                       VeracityBackend backend);

}  // namespace cove::veracity
