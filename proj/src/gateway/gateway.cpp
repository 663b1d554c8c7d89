#include "cove/gateway/gateway.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "cove/core/text.hpp"

namespace cove::gateway {

namespace {

std::optional<std::string> read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Image as it appears in request payloads. Local files carry their content
/// digest so cache keys do not depend on where a corpus is checked out.
Json image_payload(const ImageRef& ref) {
    switch (ref.kind) {
        case ImageRef::Kind::Url: return Json{{"url", ref.value}};
        case ImageRef::Kind::Bytes: return Json{{"bytes_b64", base64_encode(ref.value)}};
        case ImageRef::Kind::Path: {
            Json j{{"path", ref.value}};
            if (auto bytes = read_file(ref.value)) j["sha256"] = sha256_hex(*bytes);
            return j;
        }
    }
    return Json(nullptr);
}

/// View of a payload that is hashed into the cache key: image objects are
/// reduced to their content digest when one is available.
Json key_view(const Json& j) {
    if (j.is_object()) {
        if (j.contains("bytes_b64") && j.size() == 1)
            return Json{{"sha256", sha256_hex(base64_decode(j["bytes_b64"].get<std::string>()))}};
        if (j.contains("path") && j.contains("sha256") && j.size() == 2)
            return Json{{"sha256", j["sha256"]}};
        Json out = Json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = key_view(it.value());
        return out;
    }
    if (j.is_array()) {
        Json out = Json::array();
        for (const auto& e : j) out.push_back(key_view(e));
        return out;
    }
    return j;
}

ImageRef image_from_json(const Json& j) { return j.get<ImageRef>(); }

std::optional<std::string> opt_string(const Json& j, const char* key) {
    if (j.contains(key) && j[key].is_string()) {
        std::string s = j[key].get<std::string>();
        if (!text::trim(s).empty()) return s;
    }
    return std::nullopt;
}

double clamp01(double v) { return v < 0 ? 0 : (v > 1 ? 1 : v); }

template <typename Fn>
auto decode(ProviderKind kind, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Json::exception& e) {
        throw ProviderError(kind, false, std::string("malformed response: ") + e.what());
    }
}

}  // namespace

std::string_view mode_name(Mode m) {
    switch (m) {
        case Mode::Live: return "live";
        case Mode::Record: return "record";
        case Mode::Replay: return "replay";
    }
    return "replay";
}

std::optional<Mode> mode_from_name(std::string_view s) {
    const std::string n = text::to_lower_ascii(s);
    if (n == "live") return Mode::Live;
    if (n == "record") return Mode::Record;
    if (n == "replay") return Mode::Replay;
    return std::nullopt;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

ProviderRequest ProviderRequest::make(ProviderKind kind, const Json& payload) {
    ProviderRequest r{kind, payload.dump(), {}};
    r.cache_key = sha256_hex(std::string(kind_name(kind)) + "\n" + key_view(payload).dump());
    return r;
}

// ---------------------------------------------------------------------------

std::filesystem::path ResponseCache::path_for(ProviderKind kind, const std::string& key) const {
    return root_ / std::string(kind_name(kind)) / key;
}

std::optional<std::string> ResponseCache::get(ProviderKind kind, const std::string& key) const {
    if (root_.empty()) return std::nullopt;
    return read_file(path_for(kind, key));
}

void ResponseCache::put(ProviderKind kind, const std::string& key,
                        const std::string& response) const {
    if (root_.empty()) return;
    const auto target = path_for(kind, key);
    std::filesystem::create_directories(target.parent_path());
    std::ostringstream tmp_name;
    tmp_name << key << ".tmp." << std::this_thread::get_id();
    const auto tmp = target.parent_path() / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write cache file " + tmp.string());
        out << response;
    }
    std::filesystem::rename(tmp, target);
}

// ---------------------------------------------------------------------------

Gateway::Gateway(GatewayOptions options, std::shared_ptr<Transport> transport)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      cache_(options_.cache_dir),
      slots_(static_cast<std::ptrdiff_t>(std::clamp<size_t>(options_.max_parallel, 1, 1024))) {
    if (options_.mode == Mode::Replay && options_.cache_dir.empty())
        throw ConfigError("replay mode requires a cache directory");
    if (options_.mode == Mode::Record && options_.cache_dir.empty())
        throw ConfigError("record mode requires a cache directory");
}

void Gateway::set_local_handler(ProviderKind kind, LocalHandler handler) {
    local_[kind] = std::move(handler);
}

std::optional<size_t> Gateway::embedding_dimension() const {
    std::lock_guard lock(dim_mutex_);
    return embedding_dim_;
}

std::string Gateway::send_with_retry(const ProviderRequest& request) {
    if (!transport_) throw ProviderError(request.kind, false, "no transport configured");
    auto backoff = options_.retry.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            slots_.acquire();
            struct Release {
                std::counting_semaphore<1024>& s;
                ~Release() { s.release(); }
            } release{slots_};
            transport_calls_.add(request.kind);
            return transport_->send(request.kind, request.payload);
        } catch (const TransportError& e) {
            if (attempt >= options_.retry.attempts)
                throw ProviderError(request.kind, true, e.what());
        }
        std::this_thread::sleep_for(backoff);
        backoff = std::chrono::milliseconds(
            static_cast<long long>(static_cast<double>(backoff.count()) * options_.retry.multiplier));
    }
}

std::string Gateway::fetch(const ProviderRequest& request) {
    switch (options_.mode) {
        case Mode::Replay: {
            auto hit = cache_.get(request.kind, request.cache_key);
            if (!hit) throw FixtureMissing(request.kind, request.cache_key);
            cache_hits_.add(request.kind);
            return *hit;
        }
        case Mode::Record: {
            if (auto hit = cache_.get(request.kind, request.cache_key)) {
                cache_hits_.add(request.kind);
                return *hit;
            }
            std::string body = send_with_retry(request);
            Json parsed;
            try {
                parsed = Json::parse(body);
            } catch (const Json::exception&) {
                throw ProviderError(request.kind, false, "response is not JSON");
            }
            std::string canonical = parsed.dump();
            cache_.put(request.kind, request.cache_key, canonical);
            return canonical;
        }
        case Mode::Live: return send_with_retry(request);
    }
    throw ProviderError(request.kind, false, "unknown mode");
}

Json Gateway::call(const ProviderRequest& request) {
    calls_.add(request.kind);
    if (auto it = local_.find(request.kind); it != local_.end())
        return it->second(Json::parse(request.payload));
    const std::string body = fetch(request);
    Json response;
    try {
        response = Json::parse(body);
    } catch (const Json::exception&) {
        throw ProviderError(request.kind, false, "response is not JSON");
    }
    if (response.is_object() && response.contains("error")) {
        const Json& err = response["error"];
        throw ProviderError(request.kind, false,
                            err.is_string() ? err.get<std::string>() : err.dump());
    }
    return response;
}

Vector Gateway::checked_embedding(ProviderKind kind, const Json& response) {
    Vector v = decode(kind, [&] { return response.at("vector").get<Vector>(); });
    if (v.empty()) throw ProviderError(kind, false, "empty embedding");
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0) || !std::isfinite(norm)) throw ProviderError(kind, false, "degenerate embedding");
    for (double& x : v) x /= norm;
    std::lock_guard lock(dim_mutex_);
    if (!embedding_dim_) {
        embedding_dim_ = v.size();
    } else if (*embedding_dim_ != v.size()) {
        throw ConfigError("embedding dimension mismatch: run uses " +
                          std::to_string(*embedding_dim_) + ", provider returned " +
                          std::to_string(v.size()));
    }
    return v;
}

// ---------------------------------------------------------------------------
// Typed operations

std::string Gateway::chat_complete(const ChatPrompt& prompt) {
    if (text::trim(prompt.user).empty() && text::trim(prompt.system).empty())
        throw PreconditionError("chat prompt is empty");
    Json demos = Json::array();
    for (const auto& d : prompt.demonstrations)
        demos.push_back({{"user", d.user}, {"assistant", d.assistant}});
    Json payload{{"system", prompt.system},
                 {"demonstrations", demos},
                 {"user", prompt.user},
                 {"temperature", 0}};
    Json r = call(ProviderKind::ChatCompletion, payload);
    std::string out = decode(ProviderKind::ChatCompletion, [&] { return r.at("text").get<std::string>(); });
    if (text::trim(out).empty()) throw ProviderError(ProviderKind::ChatCompletion, false, "empty completion");
    return out;
}

std::string Gateway::caption_image(const ImageRef& image, const std::optional<BBox>& crop,
                                   const std::string& prompt) {
    Json payload{{"image", image_payload(image)}, {"prompt", prompt}, {"temperature", 0}};
    payload["crop"] = crop ? Json{{"x", crop->x}, {"y", crop->y}, {"w", crop->w}, {"h", crop->h}}
                           : Json(nullptr);
    Json r = call(ProviderKind::VisionCaption, payload);
    std::string out = decode(ProviderKind::VisionCaption, [&] { return r.at("text").get<std::string>(); });
    if (text::trim(out).empty()) throw ProviderError(ProviderKind::VisionCaption, false, "empty completion");
    return out;
}

Vector Gateway::embed_text(const std::string& t) {
    if (text::trim(t).empty()) throw PreconditionError("cannot embed empty text");
    return checked_embedding(ProviderKind::TextEmbedding,
                             call(ProviderKind::TextEmbedding, Json{{"text", t}}));
}

Vector Gateway::embed_image(const ImageRef& image) {
    if (image.value.empty()) throw PreconditionError("cannot embed empty image reference");
    return checked_embedding(ProviderKind::ImageEmbedding,
                             call(ProviderKind::ImageEmbedding, Json{{"image", image_payload(image)}}));
}

WebResult web_result_from_json(const Json& j) {
    WebResult w;
    w.url = j.at("url").get<std::string>();
    w.domain = j.contains("domain") && j["domain"].is_string() ? j["domain"].get<std::string>()
                                                               : registrable_domain(w.url);
    w.caption_field = opt_string(j, "caption");
    w.title_field = opt_string(j, "title");
    if (j.contains("image") && !j["image"].is_null()) w.image_ref = image_from_json(j["image"]);
    return w;
}

Json web_result_to_json(const WebResult& r) {
    Json j{{"url", r.url}, {"domain", r.domain}};
    if (r.caption_field) j["caption"] = *r.caption_field;
    if (r.title_field) j["title"] = *r.title_field;
    if (r.image_ref) j["image"] = *r.image_ref;
    return j;
}

ReverseSearchResult Gateway::reverse_image_search(const ImageRef& image) {
    Json r = call(ProviderKind::ReverseImageSearch, Json{{"image", image_payload(image)}});
    return decode(ProviderKind::ReverseImageSearch, [&] {
        ReverseSearchResult out;
        for (const auto& p : r.value("pages", Json::array())) out.pages.push_back(web_result_from_json(p));
        for (const auto& e : r.value("visual_entities", Json::array()))
            out.visual_entities.push_back({e.at("label").get<std::string>(), e.at("score").get<double>()});
        return out;
    });
}

std::vector<WebResult> Gateway::web_image_search(const std::string& caption) {
    if (text::trim(caption).empty()) throw PreconditionError("search query is empty");
    Json r = call(ProviderKind::WebImageSearch, Json{{"query", caption}});
    return decode(ProviderKind::WebImageSearch, [&] {
        std::vector<WebResult> out;
        for (const auto& p : r.value("results", Json::array())) out.push_back(web_result_from_json(p));
        return out;
    });
}

std::vector<DetectedObject> Gateway::detect_objects(const ImageRef& image) {
    Json r = call(ProviderKind::ObjectDetection, Json{{"image", image_payload(image)}});
    return decode(ProviderKind::ObjectDetection, [&] {
        std::vector<DetectedObject> out;
        for (const auto& o : r.value("objects", Json::array())) {
            DetectedObject d;
            d.label = o.at("label").get<std::string>();
            d.confidence = clamp01(o.at("confidence").get<double>());
            const Json& b = o.at("bbox");
            // Intersect with the unit square.
            const double x0 = clamp01(b.at("x").get<double>());
            const double y0 = clamp01(b.at("y").get<double>());
            const double x1 = clamp01(b.at("x").get<double>() + b.at("w").get<double>());
            const double y1 = clamp01(b.at("y").get<double>() + b.at("h").get<double>());
            d.bbox = {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
            out.push_back(std::move(d));
        }
        return out;
    });
}

std::vector<LinkedEntity> Gateway::link_entities(const std::string& t) {
    Json r = call(ProviderKind::EntityLinking, Json{{"text", t}});
    return decode(ProviderKind::EntityLinking, [&] {
        std::vector<LinkedEntity> out;
        for (const auto& e : r.value("entities", Json::array())) {
            LinkedEntity le;
            le.mention = e.value("mention", "");
            le.ne_label = e.at("label").get<std::string>();
            le.title = e.at("title").get<std::string>();
            le.description = opt_string(e, "description");
            out.push_back(std::move(le));
        }
        return out;
    });
}

std::vector<NamedEntity> Gateway::tag_entities(const std::string& t) {
    Json r = call(ProviderKind::NamedEntityTagging, Json{{"text", t}});
    return decode(ProviderKind::NamedEntityTagging, [&] {
        std::vector<NamedEntity> out;
        for (const auto& e : r.value("entities", Json::array()))
            out.push_back({e.at("text").get<std::string>(), e.at("label").get<std::string>()});
        return out;
    });
}

std::vector<WikiPassage> Gateway::retrieve_passages(const std::string& question) {
    if (text::trim(question).empty()) throw PreconditionError("question is empty");
    Json r = call(ProviderKind::PassageRetrieval, Json{{"query", question}});
    auto out = decode(ProviderKind::PassageRetrieval, [&] {
        std::vector<WikiPassage> ps;
        for (const auto& p : r.value("passages", Json::array())) {
            WikiPassage w{p.at("text").get<std::string>(), p.value("title", ""),
                          p.at("relevance").get<double>()};
            if (w.relevance < 0) w.relevance = 0;
            ps.push_back(std::move(w));
        }
        return ps;
    });
    std::stable_sort(out.begin(), out.end(),
                     [](const WikiPassage& a, const WikiPassage& b) { return a.relevance > b.relevance; });
    return out;
}

double Gateway::face_similarity(const ImageRef& a, const ImageRef& b) {
    Json r = call(ProviderKind::FaceSimilarity,
                  Json{{"image_a", image_payload(a)}, {"image_b", image_payload(b)}});
    return decode(ProviderKind::FaceSimilarity, [&] { return r.at("similarity").get<double>(); });
}

VeracityLabel Gateway::classify_veracity(const std::string& context, const std::string& caption) {
    Json r = call(ProviderKind::VeracityClassifier, Json{{"context", context}, {"caption", caption}});
    auto label = decode(ProviderKind::VeracityClassifier,
                        [&] { return label_from_name(r.at("label").get<std::string>()); });
    if (!label) throw ProviderError(ProviderKind::VeracityClassifier, false, "unrecognized label");
    return *label;
}

std::vector<ImageRef> Gateway::wiki_page_images(const std::string& title) {
    Json r = call(ProviderKind::WikiPageImages, Json{{"title", title}});
    return decode(ProviderKind::WikiPageImages, [&] {
        std::vector<ImageRef> out;
        for (const auto& i : r.value("images", Json::array())) out.push_back(image_from_json(i));
        return out;
    });
}

}  // namespace cove::gateway
