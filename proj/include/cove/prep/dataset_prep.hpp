#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cove/core/errors.hpp"
#include "cove/core/types.hpp"
#include "cove/gateway/providers.hpp"
#include "cove/prompts/prompts.hpp"

namespace cove::prep {

inline constexpr std::string_view kNotEnoughInformation = "not enough information";

/// Completion that is not a key-value structure. Keeps the raw text.
class DecompositionError : public ParseError {
public:
    DecompositionError(const std::string& message, std::string raw)
        : ParseError(message), raw_completion(std::move(raw)) {}
    std::string raw_completion;
};

struct DecompositionResult {
    ContextSummary gold;           // sentinel and missing keys are Unknown
    std::string raw_completion;
    /// Known items sharing no content token with the caption.
    std::vector<ContextItemKind> unsupported;
};

/// Parses a decomposition completion. The "object" key maps to Things.
DecompositionResult parse_decomposition(std::string_view completion, std::string_view caption);

DecompositionResult decompose_caption(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                      std::string_view caption);

/// Motivation known and at least one of Date, Location known.
bool caption_eligible(const ContextSummary& gold);

struct GeneratedCaption {
    std::string caption;
    size_t attempts = 0;
    std::vector<std::string> warnings;
};

inline constexpr size_t kMaxCaptionWords = 30;

/// One sentence from Date, Location and Motivation. A reply over 30 words is
/// retried once with a reminder, then accepted with a warning.
/// Throws PreconditionError("ineligible instance") when caption_eligible fails.
GeneratedCaption generate_accurate_caption(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                           const ContextSummary& gold);

size_t word_count(std::string_view s);

}  // namespace cove::prep
