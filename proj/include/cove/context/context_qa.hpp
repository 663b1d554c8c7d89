#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "cove/context/evidence.hpp"
#include "cove/prompts/prompts.hpp"

namespace cove::context {

struct ItemSpec {
    ContextItemKind kind;
    std::string_view question;
    std::set<std::string_view> relevant_ne_labels;
};

const std::array<ItemSpec, 7>& item_specs();
const ItemSpec& spec_for(ContextItemKind kind);

/// Tagged mentions whose label is relevant to the item.
size_t count_relevant(const std::vector<gateway::NamedEntity>& tagged, const ItemSpec& spec);

/// Tags `text` and counts relevant mentions. Tagger failures count 0 with a warning.
size_t count_relevant_entities(gateway::Providers& providers, const std::string& text, const ItemSpec& spec,
                               std::vector<std::string>& warnings);

/// Indices of the top-l items by count, stable (ties keep retrieval order).
std::vector<size_t> rank_by_counts(const std::vector<size_t>& counts, size_t l);

/// Top-l web captions for one item.
std::vector<web::WebCaption> rank_web_captions(const std::vector<web::WebCaption>& captions,
                                               const std::vector<size_t>& counts, size_t l);

struct ItemPrediction {
    std::optional<std::string> value;
    std::vector<std::string> provenance;
    std::vector<std::string> warnings;
    bool model_called = false;
};

/// True when a completion says the information is not available.
bool is_unknown_answer(std::string_view completion);

/// First non-empty line of a completion without an echoed "Answer:" label.
std::string clean_answer(std::string_view completion);

ItemPrediction predict_context_item(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                    const ItemSpec& spec, const std::vector<web::WebCaption>& ranked_captions,
                                    const std::string& merged_people, const std::string& merged_other,
                                    const std::vector<gateway::VisualEntity>& visual_entities);

struct ContextPrediction {
    ContextSummary summary;
    std::vector<std::string> warnings;
};

/// Predicts all seven items; captions are re-ranked per item.
ContextPrediction predict_context(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                  const EvidenceBundle& evidence, const PipelineConfig& config);

}  // namespace cove::context
