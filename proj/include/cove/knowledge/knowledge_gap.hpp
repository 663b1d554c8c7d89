#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cove/core/config.hpp"
#include "cove/gateway/providers.hpp"
#include "cove/prompts/prompts.hpp"

namespace cove::gap {

enum class Target { Date, Location };

std::string_view target_name(Target t);
ContextItemKind target_item(Target t);

struct QaPair {
    std::string question;
    std::optional<std::string> answer;
    std::string passage_title;
};

struct GapSession {
    Target target = Target::Date;
    std::vector<std::string> questions;
    std::vector<QaPair> qa_pairs;
    /// Updated value; none means Unchanged.
    std::optional<std::string> outcome;
    std::vector<std::string> warnings;
};

/// Date: Date Unknown, Location known, and one of People/Event/Motivation known.
/// Location: symmetric with Date and Location swapped.
bool should_trigger(Target target, const ContextSummary& context);

/// Known items as "name: value" lines in item order.
std::string render_known_items(const ContextSummary& context);

inline constexpr std::string_view kNoQuestionsSentinel = "No questions can be generated given the context";

/// Splits a question-generation completion into at most three questions.
std::vector<std::string> parse_questions(std::string_view completion);

std::vector<std::string> generate_questions(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                            const ContextSummary& context, Target target);

/// Answers from the single most relevant passage when its relevance exceeds
/// the configured minimum; no passage means Unknown without a model call.
QaPair answer_question(gateway::Providers& providers, const prompts::PromptLibrary& library,
                       const std::string& question, Target target, const PipelineConfig& config,
                       std::vector<std::string>& warnings);

/// Validation step. Only the target item can change.
ContextSummary validate_and_update(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                   const ContextSummary& context, GapSession& session);

struct GapResult {
    ContextSummary context;
    std::vector<GapSession> sessions;
};

/// Date first, then Location re-evaluated on the possibly updated context.
GapResult complete_knowledge_gaps(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                  const ContextSummary& context, const PipelineConfig& config);

Json to_json(const GapSession& s);

}  // namespace cove::gap
