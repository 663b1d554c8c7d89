#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cove/core/config.hpp"
#include "cove/gateway/providers.hpp"
#include "cove/wiki/wiki_entities.hpp"

namespace cove::caption {

enum class ObjectCategory { General, People, Animals, Buildings, Flags, Food, Sports, Transports, Weapons };

std::string_view category_name(ObjectCategory c);

/// Whole-image prompts.
std::string general_prompt();
std::string people_prompt();

struct CategorizedObject {
    ObjectCategory category;
    std::string prompt;
};

/// Category and concrete prompt for a detector label (case-insensitive);
/// none for labels outside the category table.
std::optional<CategorizedObject> categorize_object(const std::string& label);

struct ObjectCaption {
    ObjectCategory category;
    std::string label;
    std::string caption;
};

struct AutoCaptions {
    std::string global;
    std::string people_detail;
    std::vector<ObjectCaption> per_object;
    std::vector<std::string> warnings;
};

/// Clips to the unit square; none when the result has zero area.
std::optional<gateway::BBox> crop_rectangle(const gateway::BBox& bbox);

/// Whole-image global and people captions plus one caption per kept detection.
/// Person detections need confidence above person_detection_min_conf.
AutoCaptions generate_automated_captions(gateway::Providers& providers, const ImageRef& image,
                                         const std::vector<gateway::DetectedObject>& detections,
                                         const PipelineConfig& config);

struct MergedCaptions {
    std::string people;
    std::string other;
};

/// people = people detail, person crops, PERSON entities; other = global,
/// remaining object captions, other entities. Entities are sorted by name and
/// parts joined with "; ".
MergedCaptions merge_evidence_captions(const AutoCaptions& autos, const std::vector<wiki::CandidateEntity>& entities);

Json to_json(const AutoCaptions& a);

}  // namespace cove::caption
