#include "cove/web/web_evidence.hpp"

#include <algorithm>

#include "cove/core/text.hpp"

namespace cove::web {

std::string_view origin_name(Origin o) { return o == Origin::ReverseSearch ? "reverse_search" : "forward_search"; }

double cosine(const Vector& u, const Vector& v) {
    if (u.size() != v.size())
        throw DimensionMismatch("cosine of vectors with dimensions " + std::to_string(u.size()) + " and " +
                                std::to_string(v.size()));
    double s = 0;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return std::clamp(s, -1.0, 1.0);
}

std::optional<std::string> result_text(const gateway::WebResult& r, const PipelineConfig& config) {
    const auto& field = config.web_text_field == WebTextField::Caption ? r.caption_field : r.title_field;
    if (!field || text::trim(*field).empty()) return std::nullopt;
    return text::collapse_whitespace(*field);
}

namespace {

bool allowed(const gateway::WebResult& r, const PipelineConfig& config) {
    if (!config.domain_allowlist) return true;
    const std::string domain = r.domain.empty() ? gateway::registrable_domain(r.url) : r.domain;
    return config.domain_allowlist->count(text::to_lower_ascii(domain)) > 0;
}

std::optional<double> similarity_to(gateway::Providers& providers, const Vector& image_embedding,
                                    const gateway::WebResult& r, std::vector<std::string>& warnings) {
    if (!r.image_ref) return std::nullopt;
    try {
        return cosine(image_embedding, providers.embed_image(*r.image_ref));
    } catch (const gateway::FixtureMissing&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        warnings.push_back("web image skipped (" + r.url + "): " + e.what());
        return std::nullopt;
    }
}

}  // namespace

WebEvidence collect_web_captions(gateway::Providers& providers, const Vector& image_embedding,
                                 const gateway::ReverseSearchResult& reverse,
                                 const std::vector<gateway::WebResult>& forward,
                                 const PipelineConfig& config) {
    WebEvidence out;
    out.visual_entities = reverse.visual_entities;
    for (const auto& r : reverse.pages) {
        if (!allowed(r, config)) continue;
        auto t = result_text(r, config);
        if (!t) continue;
        WebCaption c{*t, r.url, r.domain, Origin::ReverseSearch, std::nullopt};
        c.image_similarity = similarity_to(providers, image_embedding, r, out.warnings);
        out.captions.push_back(std::move(c));
    }
    for (const auto& r : forward) {
        if (!allowed(r, config)) continue;
        auto sim = similarity_to(providers, image_embedding, r, out.warnings);
        if (!sim) continue;
        auto t = result_text(r, config);
        out.forward.push_back({r.url, r.domain, t, *sim});
        if (*sim > config.t_match && t)
            out.captions.push_back({*t, r.url, r.domain, Origin::ForwardSearch, sim});
    }
    return out;
}

std::optional<VeracityVerdict> apply_veracity_rules(const std::string& caption, const WebEvidence& evidence,
                                                    const PipelineConfig& config) {
    const std::string key = text::match_key(caption);
    for (const auto& c : evidence.captions)
        if (c.origin == Origin::ReverseSearch && text::match_key(c.text) == key)
            return VeracityVerdict::from_rule(VerdictStage::RuleExactMatch, VeracityLabel::Accurate);
    for (const auto& f : evidence.forward)
        if (f.similarity > config.t_match)
            return VeracityVerdict::from_rule(VerdictStage::RuleImageMatch, VeracityLabel::Accurate);
    for (const auto& f : evidence.forward)
        if (f.similarity < config.t_non_match && f.text && text::match_key(*f.text) == key)
            return VeracityVerdict::from_rule(VerdictStage::RuleNonMatchOOC, VeracityLabel::OOC);
    return std::nullopt;
}

std::vector<gateway::VisualEntity> filter_visual_entities(const std::vector<gateway::VisualEntity>& entities,
                                                          const PipelineConfig& config) {
    std::vector<gateway::VisualEntity> out;
    for (const auto& e : entities)
        if (e.score >= config.visual_entity_min_score && !text::trim(e.label).empty()) out.push_back(e);
    return out;
}

Json to_json(const WebEvidence& e) {
    Json captions = Json::array();
    for (const auto& c : e.captions) {
        Json j{{"text", c.text}, {"url", c.url}, {"domain", c.domain}, {"origin", origin_name(c.origin)}};
        j["image_similarity"] = c.image_similarity ? Json(*c.image_similarity) : Json(nullptr);
        captions.push_back(std::move(j));
    }
    Json forward = Json::array();
    for (const auto& f : e.forward) {
        Json j{{"url", f.url}, {"domain", f.domain}, {"similarity", f.similarity}};
        j["text"] = f.text ? Json(*f.text) : Json(nullptr);
        forward.push_back(std::move(j));
    }
    Json visual = Json::array();
    for (const auto& v : e.visual_entities) visual.push_back({{"label", v.label}, {"score", v.score}});
    return Json{{"captions", captions}, {"forward", forward}, {"visual_entities", visual}, {"warnings", e.warnings}};
}

}  // namespace cove::web
