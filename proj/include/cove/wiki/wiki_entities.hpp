#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "cove/core/config.hpp"
#include "cove/gateway/providers.hpp"

namespace cove::wiki {

using gateway::Vector;

enum class NeKind { Person, Fac, Product, Other };
enum class EntityOrigin { CaptionLinked, KnnIndex };

std::string_view ne_kind_name(NeKind k);
std::optional<NeKind> linkable_kind(std::string_view ne_label);
std::string_view entity_origin_name(EntityOrigin o);

struct CandidateEntity {
    std::string name;
    NeKind kind = NeKind::Other;
    EntityOrigin origin = EntityOrigin::KnnIndex;
    std::optional<std::string> description;
    std::optional<double> name_image_similarity;
    std::vector<double> image_image_similarities;  // at most 3
};

/// Entity names with unit text-embedding vectors, scanned exhaustively.
class EntityIndex {
public:
    struct Hit {
        size_t index;
        double similarity;
    };

    EntityIndex() = default;

    /// One record per line: name<TAB>comma-separated floats. Vectors are normalized on load.
    static EntityIndex load(const std::filesystem::path& file);
    static EntityIndex parse(std::istream& in, std::string description = {});

    void add(std::string name, Vector vector);
    size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }
    size_t dimension() const { return dim_; }
    const std::string& name(size_t i) const { return names_[i]; }
    const Vector& vector(size_t i) const { return vectors_[i]; }
    const std::string& description() const { return description_; }

    /// Top-k by cosine, descending; ties by insertion order.
    std::vector<Hit> search(const Vector& query, size_t k) const;

private:
    std::vector<std::string> names_;
    std::vector<Vector> vectors_;
    size_t dim_ = 0;
    std::string description_;
};

/// Caption mentions linked to encyclopedia titles, restricted to PERSON, FAC
/// and PRODUCT. Provider failures degrade to an empty list with a warning.
std::vector<CandidateEntity> extract_caption_entities(gateway::Providers& providers, const std::string& caption,
                                                      std::vector<std::string>& warnings);

/// Exactly min(k, |index|) candidates sorted by similarity to the image embedding.
std::vector<CandidateEntity> knn_entities(const Vector& image_embedding, const EntityIndex& index, size_t k);

/// Merges duplicate names; the CaptionLinked record wins and keeps the larger name similarity.
std::vector<CandidateEntity> merge_candidates(std::vector<CandidateEntity> candidates);

/// Keeps candidates whose name embedding is closer to the image than
/// t_wiki_text, or one of whose first three page images passes t_wiki_image
/// (face similarity for PERSON, embedding cosine otherwise). Output sorted by name.
std::vector<CandidateEntity> retain_entities(gateway::Providers& providers, std::vector<CandidateEntity> candidates,
                                             const ImageRef& image, const Vector& image_embedding,
                                             const PipelineConfig& config, std::vector<std::string>& warnings);

Json to_json(const CandidateEntity& c);

}  // namespace cove::wiki
