#pragma once

#include <string>
#include <vector>

#include "cove/caption/auto_caption.hpp"
#include "cove/web/web_evidence.hpp"
#include "cove/wiki/wiki_entities.hpp"

namespace cove::context {

/// Everything steps 1-3 collected for one instance.
struct EvidenceBundle {
    web::WebEvidence web;
    /// Visual entities that passed the score floor; empty when the component is off.
    std::vector<gateway::VisualEntity> visual_entities;
    std::vector<wiki::CandidateEntity> wiki_entities;
    caption::AutoCaptions auto_captions;
    caption::MergedCaptions merged;
    std::vector<std::string> warnings;

    bool empty() const {
        return web.captions.empty() && visual_entities.empty() && merged.people.empty() && merged.other.empty();
    }
};

Json to_json(const EvidenceBundle& b);

}  // namespace cove::context
