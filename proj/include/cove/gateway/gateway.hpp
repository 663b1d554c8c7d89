#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>

#include "cove/gateway/providers.hpp"

namespace cove::gateway {

enum class Mode { Live, Record, Replay };

std::string_view mode_name(Mode m);
std::optional<Mode> mode_from_name(std::string_view s);

/// A request in canonical form: sorted keys, no insignificant whitespace.
struct ProviderRequest {
    ProviderKind kind;
    std::string payload;
    std::string cache_key;

    static ProviderRequest make(ProviderKind kind, const Json& payload);
};

/// SHA-256 of the bytes, lowercase hex.
std::string sha256_hex(std::string_view bytes);

/// Content-addressed response store: <root>/<provider_kind>/<digest>.
/// Writes go through a temporary file and an atomic rename, so concurrent
/// readers never see partial files.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path root) : root_(std::move(root)) {}

    std::optional<std::string> get(ProviderKind kind, const std::string& key) const;
    void put(ProviderKind kind, const std::string& key, const std::string& response) const;
    std::filesystem::path path_for(ProviderKind kind, const std::string& key) const;
    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
};

/// Network failure, timeout or 5xx. Retried by the gateway.
class TransportError : public Error {
public:
    using Error::Error;
};

/// Wire-level access to a backend. Receives the canonical request payload and
/// returns the response body (a JSON document).
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string send(ProviderKind kind, const std::string& payload) = 0;
};

/// POSTs the payload to the endpoint in COVE_<KIND>_URL with an optional
/// bearer token from COVE_<KIND>_KEY (KIND upper-cased, e.g. COVE_CHAT_COMPLETION_URL).
class HttpTransport final : public Transport {
public:
    explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(120))
        : timeout_(timeout) {}
    std::string send(ProviderKind kind, const std::string& payload) override;

    static std::string endpoint_variable(ProviderKind kind);
    static std::string credential_variable(ProviderKind kind);

private:
    std::chrono::seconds timeout_;
};

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{200};
    double multiplier = 2.0;
};

/// In-process backend for a provider kind; bypasses cache and transport.
using LocalHandler = std::function<Json(const Json& request)>;

struct GatewayOptions {
    Mode mode = Mode::Replay;
    std::filesystem::path cache_dir;
    size_t max_parallel = 4;
    RetryPolicy retry{};
};

/// Provider implementation backed by a transport and a response cache.
///
/// Live calls the transport only. Record serves cached responses and records
/// misses. Replay serves only from the cache and never touches the transport.
class Gateway final : public Providers {
public:
    Gateway(GatewayOptions options, std::shared_ptr<Transport> transport);

    /// Canonical request/response exchange. Responses carrying a top-level
    /// "error" member raise a non-retryable ProviderError.
    Json call(const ProviderRequest& request);
    Json call(ProviderKind kind, const Json& payload) { return call(ProviderRequest::make(kind, payload)); }

    void set_local_handler(ProviderKind kind, LocalHandler handler);

    Mode mode() const { return options_.mode; }
    const CallCounts& calls() const { return calls_; }
    const CallCounts& cache_hits() const { return cache_hits_; }
    const CallCounts& transport_calls() const { return transport_calls_; }
    std::optional<size_t> embedding_dimension() const;

    std::string chat_complete(const ChatPrompt& prompt) override;
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
    std::string fetch(const ProviderRequest& request);
    std::string send_with_retry(const ProviderRequest& request);
    Vector checked_embedding(ProviderKind kind, const Json& response);

    GatewayOptions options_;
    std::shared_ptr<Transport> transport_;
    ResponseCache cache_;
    std::counting_semaphore<1024> slots_;
    std::map<ProviderKind, LocalHandler> local_;
    CallCounts calls_;
    CallCounts cache_hits_;
    CallCounts transport_calls_;
    mutable std::mutex dim_mutex_;
    std::optional<size_t> embedding_dim_;
};

// Response decoding shared with fixture tooling.
WebResult web_result_from_json(const Json& j);
Json web_result_to_json(const WebResult& r);

}  // namespace cove::gateway
