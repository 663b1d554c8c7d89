#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "cove/core/types.hpp"

namespace cove {

/// Pipeline components that can be switched off for ablations.
struct Toggles {
    bool web_captions = true;
    bool visual_entities = true;
    bool wikipedia_entities = true;
    bool automated_captions = true;
    bool knowledge_gap = true;
    bool context_prediction = true;
    /// Off: instances the rules leave open are judged with an empty context.
    bool veracity_prediction = true;
    bool veracity_rules = true;

    bool operator==(const Toggles&) const = default;
};

/// Which web-evidence field is used as caption text.
enum class WebTextField { Caption, Title };

enum class VeracityBackend { Generative, Classifier };

struct PipelineConfig {
    double t_match = 0.92;
    double t_non_match = 0.7;
    double visual_entity_min_score = 0.1;
    double t_wiki_text = 0.23;
    double t_wiki_image_person = 0.92;
    double t_wiki_image_other = 0.7;
    double person_detection_min_conf = 0.8;
    int knn_k = 5;
    int web_caption_budget_l = 10;
    double wiki_passage_relevance_min = 20.0;
    double temperature = 0.0;
    Toggles toggles{};
    std::optional<std::set<std::string>> domain_allowlist;
    WebTextField web_text_field = WebTextField::Caption;
    VeracityBackend veracity_backend = VeracityBackend::Generative;
    /// Predict context for instances already decided by a rule (costs chat calls).
    bool context_for_rule_verdicts = false;
    /// Instance-level parallelism. Output does not depend on it.
    int workers = 4;
    /// Optional resource files; relative paths resolve against the config file.
    std::string entity_index;
    std::string ner_gazetteer;
    std::string prompts_dir;

    /// Throws ConfigError when a value is out of range or thresholds are misordered.
    void validate() const;
    bool operator==(const PipelineConfig&) const = default;
};

/// Parses a JSON key-value document. Nested objects flatten to dotted keys,
/// so {"toggles": {"knowledge_gap": false}} and {"toggles.knowledge_gap": false}
/// are equivalent. Blank text yields the defaults.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Applies "name=on|off" pairs separated by commas ("knowledge_gap=off,web_captions=off").
Toggles apply_toggle_overrides(Toggles base, std::string_view spec);

/// The source domains of the trustworthy-news experiment.
std::set<std::string> trusted_news_domains();

void to_json(Json& j, const Toggles& t);
void from_json(const Json& j, Toggles& t);
void to_json(Json& j, const PipelineConfig& c);
void from_json(const Json& j, PipelineConfig& c);

}  // namespace cove
