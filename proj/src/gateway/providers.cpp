#include "cove/gateway/providers.hpp"

#include <set>

#include "cove/core/text.hpp"

namespace cove::gateway {

namespace {

constexpr std::array<std::string_view, kProviderKindCount> kKindNames = {
    "chat_completion",    "vision_caption",    "text_embedding",   "image_embedding",
    "reverse_image_search", "web_image_search", "object_detection", "entity_linking",
    "named_entity_tagging", "passage_retrieval", "face_similarity", "veracity_classifier",
    "wiki_page_images"};

// Second-level labels under which registrations happen one level deeper.
const std::set<std::string>& multi_label_suffixes() {
    static const std::set<std::string> s = {
        "co.uk", "org.uk", "ac.uk",  "gov.uk", "com.au", "net.au", "org.au", "co.in",
        "net.in", "org.in", "gov.in", "co.za", "org.za", "com.br", "co.jp", "ne.jp",
        "or.jp", "co.nz", "com.cn", "com.mx", "com.tr", "co.ke", "com.ng", "com.et",
        "com.eg", "co.il", "com.sg", "com.hk", "com.tw", "co.kr"};
    return s;
}

}  // namespace

std::string_view kind_name(ProviderKind k) { return kKindNames[static_cast<size_t>(k)]; }

std::optional<ProviderKind> kind_from_name(std::string_view s) {
    for (size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == s) return static_cast<ProviderKind>(i);
    return std::nullopt;
}

std::array<ProviderKind, kProviderKindCount> all_provider_kinds() {
    std::array<ProviderKind, kProviderKindCount> out{};
    for (size_t i = 0; i < kProviderKindCount; ++i) out[i] = static_cast<ProviderKind>(i);
    return out;
}

size_t CallCounts::total() const {
    size_t t = 0;
    for (const auto& c : counts_) t += c.load();
    return t;
}

Json CallCounts::to_json() const {
    Json j = Json::object();
    for (auto k : all_provider_kinds()) j[std::string(kind_name(k))] = get(k);
    return j;
}

std::string CountingProviders::chat_complete(const ChatPrompt& p) {
    counts_.add(ProviderKind::ChatCompletion);
    return inner_.chat_complete(p);
}
std::string CountingProviders::caption_image(const ImageRef& image,
                                             const std::optional<BBox>& crop,
                                             const std::string& prompt) {
    counts_.add(ProviderKind::VisionCaption);
    return inner_.caption_image(image, crop, prompt);
}
Vector CountingProviders::embed_text(const std::string& text) {
    counts_.add(ProviderKind::TextEmbedding);
    return inner_.embed_text(text);
}
Vector CountingProviders::embed_image(const ImageRef& image) {
    counts_.add(ProviderKind::ImageEmbedding);
    return inner_.embed_image(image);
}
ReverseSearchResult CountingProviders::reverse_image_search(const ImageRef& image) {
    counts_.add(ProviderKind::ReverseImageSearch);
    return inner_.reverse_image_search(image);
}
std::vector<WebResult> CountingProviders::web_image_search(const std::string& caption) {
    counts_.add(ProviderKind::WebImageSearch);
    return inner_.web_image_search(caption);
}
std::vector<DetectedObject> CountingProviders::detect_objects(const ImageRef& image) {
    counts_.add(ProviderKind::ObjectDetection);
    return inner_.detect_objects(image);
}
std::vector<LinkedEntity> CountingProviders::link_entities(const std::string& text) {
    counts_.add(ProviderKind::EntityLinking);
    return inner_.link_entities(text);
}
std::vector<NamedEntity> CountingProviders::tag_entities(const std::string& text) {
    counts_.add(ProviderKind::NamedEntityTagging);
    return inner_.tag_entities(text);
}
std::vector<WikiPassage> CountingProviders::retrieve_passages(const std::string& question) {
    counts_.add(ProviderKind::PassageRetrieval);
    return inner_.retrieve_passages(question);
}
double CountingProviders::face_similarity(const ImageRef& a, const ImageRef& b) {
    counts_.add(ProviderKind::FaceSimilarity);
    return inner_.face_similarity(a, b);
}
VeracityLabel CountingProviders::classify_veracity(const std::string& context,
                                                   const std::string& caption) {
    counts_.add(ProviderKind::VeracityClassifier);
    return inner_.classify_veracity(context, caption);
}
std::vector<ImageRef> CountingProviders::wiki_page_images(const std::string& title) {
    counts_.add(ProviderKind::WikiPageImages);
    return inner_.wiki_page_images(title);
}

std::string registrable_domain(std::string_view url) {
    std::string_view rest = url;
    if (auto p = rest.find("://"); p != std::string_view::npos) rest = rest.substr(p + 3);
    rest = rest.substr(0, rest.find_first_of("/?#"));
    if (auto at = rest.rfind('@'); at != std::string_view::npos) rest = rest.substr(at + 1);
    rest = rest.substr(0, rest.find(':'));
    std::string host = text::to_lower_ascii(rest);
    while (!host.empty() && host.back() == '.') host.pop_back();

    std::vector<std::string> labels;
    size_t start = 0;
    for (size_t i = 0; i <= host.size(); ++i) {
        if (i == host.size() || host[i] == '.') {
            if (i > start) labels.push_back(host.substr(start, i - start));
            start = i + 1;
        }
    }
    if (labels.size() <= 2) return text::join(labels, ".");
    const std::string last_two = labels[labels.size() - 2] + "." + labels.back();
    const size_t keep = multi_label_suffixes().count(last_two) ? 3 : 2;
    std::vector<std::string> tail(labels.end() - static_cast<long>(keep), labels.end());
    return text::join(tail, ".");
}

}  // namespace cove::gateway
