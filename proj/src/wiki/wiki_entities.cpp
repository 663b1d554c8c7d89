#include "cove/wiki/wiki_entities.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cove/core/text.hpp"
#include "cove/web/web_evidence.hpp"

namespace cove::wiki {

std::string_view ne_kind_name(NeKind k) {
    switch (k) {
        case NeKind::Person: return "PERSON";
        case NeKind::Fac: return "FAC";
        case NeKind::Product: return "PRODUCT";
        case NeKind::Other: return "Other";
    }
    return "Other";
}

std::optional<NeKind> linkable_kind(std::string_view ne_label) {
    if (ne_label == "PERSON") return NeKind::Person;
    if (ne_label == "FAC") return NeKind::Fac;
    if (ne_label == "PRODUCT") return NeKind::Product;
    return std::nullopt;
}

std::string_view entity_origin_name(EntityOrigin o) {
    return o == EntityOrigin::CaptionLinked ? "caption_linked" : "knn_index";
}

// ---------------------------------------------------------------------------

EntityIndex EntityIndex::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot read entity index " + file.string());
    return parse(in, file.filename().string());
}

EntityIndex EntityIndex::parse(std::istream& in, std::string description) {
    EntityIndex index;
    index.description_ = std::move(description);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos)
            throw ParseError("entity index line " + std::to_string(lineno) + ": expected name<TAB>vector");
        Vector v;
        std::stringstream ss(line.substr(tab + 1));
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("entity index line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        index.add(line.substr(0, tab), std::move(v));
    }
    return index;
}

void EntityIndex::add(std::string name, Vector v) {
    if (v.empty()) throw ParseError("entity '" + name + "' has an empty vector");
    if (dim_ == 0) dim_ = v.size();
    if (v.size() != dim_)
        throw DimensionMismatch("entity '" + name + "' has dimension " + std::to_string(v.size()) + ", index uses " +
                                std::to_string(dim_));
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0)) throw ParseError("entity '" + name + "' has a zero vector");
    for (double& x : v) x /= norm;
    names_.push_back(std::move(name));
    vectors_.push_back(std::move(v));
}

std::vector<EntityIndex::Hit> EntityIndex::search(const Vector& query, size_t k) const {
    if (!empty() && query.size() != dim_)
        throw DimensionMismatch("query dimension " + std::to_string(query.size()) + " does not match index dimension " +
                                std::to_string(dim_));
    std::vector<Hit> hits;
    hits.reserve(size());
    for (size_t i = 0; i < size(); ++i) hits.push_back({i, web::cosine(query, vectors_[i])});
    const size_t n = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<long>(n), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.index < b.index;
    });
    hits.resize(n);
    return hits;
}

// ---------------------------------------------------------------------------

std::vector<CandidateEntity> extract_caption_entities(gateway::Providers& providers, const std::string& caption,
                                                      std::vector<std::string>& warnings) {
    if (text::trim(caption).empty()) throw PreconditionError("caption is empty");
    std::vector<gateway::LinkedEntity> linked;
    try {
        linked = providers.link_entities(caption);
    } catch (const gateway::FixtureMissing&) {
        throw;
    } catch (const Error& e) {
        warnings.push_back(std::string("entity linking failed: ") + e.what());
        return {};
    }
    std::vector<CandidateEntity> out;
    for (const auto& le : linked) {
        auto kind = linkable_kind(le.ne_label);
        if (!kind || text::trim(le.title).empty()) continue;
        CandidateEntity c;
        c.name = std::string(text::trim(le.title));
        c.kind = *kind;
        c.origin = EntityOrigin::CaptionLinked;
        c.description = le.description;
        out.push_back(std::move(c));
    }
    return merge_candidates(std::move(out));
}

std::vector<CandidateEntity> knn_entities(const Vector& image_embedding, const EntityIndex& index, size_t k) {
    if (index.empty()) throw PreconditionError("entity index is empty");
    if (k < 1) throw PreconditionError("k must be at least 1");
    std::vector<CandidateEntity> out;
    for (const auto& hit : index.search(image_embedding, k)) {
        CandidateEntity c;
        c.name = index.name(hit.index);
        c.origin = EntityOrigin::KnnIndex;
        c.name_image_similarity = hit.similarity;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CandidateEntity> merge_candidates(std::vector<CandidateEntity> candidates) {
    std::vector<CandidateEntity> out;
    std::map<std::string, size_t> seen;
    for (auto& c : candidates) {
        const std::string key = text::loose_key(c.name);
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(key, out.size());
            out.push_back(std::move(c));
            continue;
        }
        CandidateEntity& kept = out[it->second];
        std::optional<double> sim = kept.name_image_similarity;
        if (c.name_image_similarity && (!sim || *c.name_image_similarity > *sim)) sim = c.name_image_similarity;
        if (kept.origin != EntityOrigin::CaptionLinked && c.origin == EntityOrigin::CaptionLinked) kept = std::move(c);
        kept.name_image_similarity = sim;
    }
    return out;
}

std::vector<CandidateEntity> retain_entities(gateway::Providers& providers, std::vector<CandidateEntity> candidates,
                                             const ImageRef& image, const Vector& image_embedding,
                                             const PipelineConfig& config, std::vector<std::string>& warnings) {
    std::vector<CandidateEntity> retained;
    for (auto& c : merge_candidates(std::move(candidates))) {
        if (!c.name_image_similarity) {
            try {
                c.name_image_similarity = web::cosine(providers.embed_text(c.name), image_embedding);
            } catch (const gateway::FixtureMissing&) {
                throw;
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                warnings.push_back("name embedding failed for '" + c.name + "': " + e.what());
            }
        }
        if (c.name_image_similarity && *c.name_image_similarity > config.t_wiki_text) {
            retained.push_back(std::move(c));
            continue;
        }
        std::vector<ImageRef> pages;
        try {
            pages = providers.wiki_page_images(c.name);
        } catch (const gateway::FixtureMissing&) {
            throw;
        } catch (const Error& e) {
            warnings.push_back("page images unavailable for '" + c.name + "': " + e.what());
        }
        if (pages.size() > 3) pages.resize(3);
        const bool person = c.kind == NeKind::Person;
        const double threshold = person ? config.t_wiki_image_person : config.t_wiki_image_other;
        bool keep = false;
        for (const auto& page_image : pages) {
            try {
                const double s = person ? providers.face_similarity(image, page_image)
                                        : web::cosine(image_embedding, providers.embed_image(page_image));
                c.image_image_similarities.push_back(s);
                if (s > threshold) keep = true;
            } catch (const gateway::FixtureMissing&) {
                throw;
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                warnings.push_back("page image skipped for '" + c.name + "': " + e.what());
            }
        }
        if (keep) retained.push_back(std::move(c));
    }
    std::sort(retained.begin(), retained.end(),
              [](const CandidateEntity& a, const CandidateEntity& b) { return a.name < b.name; });
    return retained;
}

Json to_json(const CandidateEntity& c) {
    Json j{{"name", c.name},
           {"kind", ne_kind_name(c.kind)},
           {"origin", entity_origin_name(c.origin)},
           {"image_image_similarities", c.image_image_similarities}};
    j["name_image_similarity"] = c.name_image_similarity ? Json(*c.name_image_similarity) : Json(nullptr);
    j["description"] = c.description ? Json(*c.description) : Json(nullptr);
    return j;
}

}  // namespace cove::wiki
