#pragma once

#include <array>
#include <atomic>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cove/core/errors.hpp"
#include "cove/core/types.hpp"

namespace cove::gateway {

/// Every external capability the pipeline consumes.
enum class ProviderKind {
    ChatCompletion,
    VisionCaption,
    TextEmbedding,
    ImageEmbedding,
    ReverseImageSearch,
    WebImageSearch,
    ObjectDetection,
    EntityLinking,
    NamedEntityTagging,
    PassageRetrieval,
    FaceSimilarity,
    VeracityClassifier,
    WikiPageImages,
};

inline constexpr size_t kProviderKindCount = 13;

std::string_view kind_name(ProviderKind k);
std::optional<ProviderKind> kind_from_name(std::string_view s);
std::array<ProviderKind, kProviderKindCount> all_provider_kinds();

/// Raised by providers. Transport failures are retryable; recorded failures
/// (for example an unreachable web image) are not.
class ProviderError : public Error {
public:
    ProviderError(ProviderKind kind, bool retryable, const std::string& what)
        : Error(std::string(kind_name(kind)) + ": " + what), kind_(kind), retryable_(retryable) {}
    ProviderKind kind() const { return kind_; }
    bool retryable() const { return retryable_; }

private:
    ProviderKind kind_;
    bool retryable_;
};

/// Replay mode found no recorded response for a request.
class FixtureMissing : public ProviderError {
public:
    FixtureMissing(ProviderKind kind, std::string key)
        : ProviderError(kind, false, "fixture missing for cache key " + key), key_(std::move(key)) {}
    const std::string& cache_key() const { return key_; }

private:
    std::string key_;
};

using Vector = std::vector<double>;

struct WebResult {
    std::string url;
    std::string domain;
    std::optional<std::string> caption_field;
    std::optional<std::string> title_field;
    std::optional<ImageRef> image_ref;
};

struct VisualEntity {
    std::string label;
    double score = 0.0;
};

struct ReverseSearchResult {
    std::vector<WebResult> pages;
    std::vector<VisualEntity> visual_entities;
};

/// Normalized rectangle: origin and extent in [0,1].
struct BBox {
    double x = 0, y = 0, w = 0, h = 0;
    bool operator==(const BBox&) const = default;
};

struct DetectedObject {
    std::string label;
    double confidence = 0.0;
    BBox bbox;
};

/// A caption mention resolved to an encyclopedia page.
struct LinkedEntity {
    std::string mention;
    std::string ne_label;
    std::string title;
    std::optional<std::string> description;
};

struct NamedEntity {
    std::string text;
    std::string label;
};

struct WikiPassage {
    std::string text;
    std::string page_title;
    double relevance = 0.0;
};

struct Demonstration {
    std::string user;
    std::string assistant;
};

struct ChatPrompt {
    std::string system;
    std::vector<Demonstration> demonstrations;
    std::string user;
};

/// Uniform typed surface over the external capabilities.
class Providers {
public:
    virtual ~Providers() = default;

    virtual std::string chat_complete(const ChatPrompt& prompt) = 0;
    virtual std::string caption_image(const ImageRef& image, const std::optional<BBox>& crop,
                                      const std::string& prompt) = 0;
    virtual Vector embed_text(const std::string& text) = 0;
    virtual Vector embed_image(const ImageRef& image) = 0;
    virtual ReverseSearchResult reverse_image_search(const ImageRef& image) = 0;
    virtual std::vector<WebResult> web_image_search(const std::string& caption) = 0;
    virtual std::vector<DetectedObject> detect_objects(const ImageRef& image) = 0;
    virtual std::vector<LinkedEntity> link_entities(const std::string& text) = 0;
    virtual std::vector<NamedEntity> tag_entities(const std::string& text) = 0;
    virtual std::vector<WikiPassage> retrieve_passages(const std::string& question) = 0;
    virtual double face_similarity(const ImageRef& a, const ImageRef& b) = 0;
    virtual VeracityLabel classify_veracity(const std::string& context,
                                            const std::string& caption) = 0;
    virtual std::vector<ImageRef> wiki_page_images(const std::string& title) = 0;
};

/// Per-kind call counters.
class CallCounts {
public:
    CallCounts() { reset(); }
    CallCounts(const CallCounts& o) {
        for (size_t i = 0; i < kProviderKindCount; ++i) counts_[i] = o.counts_[i].load();
    }
    CallCounts& operator=(const CallCounts& o) {
        for (size_t i = 0; i < kProviderKindCount; ++i) counts_[i] = o.counts_[i].load();
        return *this;
    }

    void add(ProviderKind k) { counts_[static_cast<size_t>(k)].fetch_add(1); }
    size_t get(ProviderKind k) const { return counts_[static_cast<size_t>(k)].load(); }
    size_t total() const;
    void reset() {
        for (auto& c : counts_) c = 0;
    }
    Json to_json() const;

private:
    std::array<std::atomic<size_t>, kProviderKindCount> counts_;
};

/// Forwards to another provider set and counts calls per kind.
class CountingProviders final : public Providers {
public:
    explicit CountingProviders(Providers& inner) : inner_(inner) {}
    const CallCounts& counts() const { return counts_; }

    std::string chat_complete(const ChatPrompt& p) override;
    std::string caption_image(const ImageRef& image, const std::optional<BBox>& crop,
                              const std::string& prompt) override;
    Vector embed_text(const std::string& text) override;
    Vector embed_image(const ImageRef& image) override;
    ReverseSearchResult reverse_image_search(const ImageRef& image) override;
    std::vector<WebResult> web_image_search(const std::string& caption) override;
    std::vector<DetectedObject> detect_objects(const ImageRef& image) override;
    std::vector<LinkedEntity> link_entities(const std::string& text) override;
    std::vector<NamedEntity> tag_entities(const std::string& text) override;
    std::vector<WikiPassage> retrieve_passages(const std::string& question) override;
    double face_similarity(const ImageRef& a, const ImageRef& b) override;
    VeracityLabel classify_veracity(const std::string& context, const std::string& caption) override;
    std::vector<ImageRef> wiki_page_images(const std::string& title) override;

private:
    Providers& inner_;
    CallCounts counts_;
};

/// Registrable domain of a URL ("https://www.bbc.co.uk/x" -> "bbc.co.uk").
std::string registrable_domain(std::string_view url);

}  // namespace cove::gateway
