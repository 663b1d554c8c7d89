#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cove/gateway/gateway.hpp"

namespace cove::gateway {

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::optional<std::string> env(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

// Remote backends cannot read local paths, so file references are inlined.
void inline_local_images(Json& j) {
    if (j.is_object()) {
        if (j.contains("path") && j["path"].is_string() && !j.contains("bytes_b64")) {
            std::ifstream in(j["path"].get<std::string>(), std::ios::binary);
            if (in) {
                std::stringstream ss;
                ss << in.rdbuf();
                j["bytes_b64"] = base64_encode(ss.str());
            }
        }
        for (auto& [_, v] : j.items()) inline_local_images(v);
    } else if (j.is_array()) {
        for (auto& v : j) inline_local_images(v);
    }
}

}  // namespace

std::string HttpTransport::endpoint_variable(ProviderKind kind) {
    return "COVE_" + upper(kind_name(kind)) + "_URL";
}

std::string HttpTransport::credential_variable(ProviderKind kind) {
    return "COVE_" + upper(kind_name(kind)) + "_KEY";
}

std::string HttpTransport::send(ProviderKind kind, const std::string& payload) {
    const auto url = env(endpoint_variable(kind));
    if (!url) throw ProviderError(kind, false, "endpoint not configured (" + endpoint_variable(kind) + ")");

    const auto scheme_end = url->find("://");
    const auto path_start = url->find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin = url->substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url->substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers headers;
    if (auto key = env(credential_variable(kind))) headers.emplace("Authorization", "Bearer " + *key);

    Json body = Json::parse(payload);
    inline_local_images(body);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) throw TransportError(std::string(kind_name(kind)) + ": " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
        throw TransportError(std::string(kind_name(kind)) + ": HTTP " + std::to_string(res->status));
    if (res->status >= 400)
        throw ProviderError(kind, false, "HTTP " + std::to_string(res->status) + ": " + res->body);
    return res->body;
}

}  // namespace cove::gateway
