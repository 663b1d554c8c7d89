#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cove/core/config.hpp"
#include "cove/gateway/providers.hpp"

namespace cove::web {

using gateway::Vector;

enum class Origin { ReverseSearch, ForwardSearch };

std::string_view origin_name(Origin o);

struct WebCaption {
    std::string text;
    std::string url;
    std::string domain;
    Origin origin = Origin::ReverseSearch;
    std::optional<double> image_similarity;
};

/// A forward-search result whose image could be compared with the instance image.
struct ForwardMatch {
    std::string url;
    std::string domain;
    std::optional<std::string> text;
    double similarity = 0.0;
};

struct WebEvidence {
    /// Captions passed downstream, in retrieval order (reverse results first).
    std::vector<WebCaption> captions;
    /// Every scored forward result, including those below t_match (needed by rule 3).
    std::vector<ForwardMatch> forward;
    std::vector<gateway::VisualEntity> visual_entities;
    std::vector<std::string> warnings;
};

/// Dot product of two unit vectors. Throws DimensionMismatch.
double cosine(const Vector& u, const Vector& v);

/// Text of a web result under the configured field policy.
std::optional<std::string> result_text(const gateway::WebResult& r, const PipelineConfig& config);

/// Builds web captions from reverse and forward search results.
///
/// The allowlist (when configured) is applied before any similarity work.
/// Reverse captions are always kept; their image similarity is recorded when
/// the result carries an image. Forward captions are kept iff the web image is
/// more similar than t_match. Images that cannot be embedded are skipped.
WebEvidence collect_web_captions(gateway::Providers& providers, const Vector& image_embedding,
                                 const gateway::ReverseSearchResult& reverse,
                                 const std::vector<gateway::WebResult>& forward,
                                 const PipelineConfig& config);

/// Rules in order: exact match with a reverse caption (Accurate), forward
/// similarity above t_match (Accurate), forward similarity below t_non_match
/// with an exactly matching caption (OOC). First hit wins.
std::optional<VeracityVerdict> apply_veracity_rules(const std::string& caption,
                                                    const WebEvidence& evidence,
                                                    const PipelineConfig& config);

/// Visual entities at or above the configured score floor, in input order.
std::vector<gateway::VisualEntity> filter_visual_entities(const std::vector<gateway::VisualEntity>& entities,
                                                          const PipelineConfig& config);

Json to_json(const WebEvidence& e);

}  // namespace cove::web
