#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <thread>

#include "cove/gateway/gateway.hpp"
#include "cove/gateway/gazetteer_tagger.hpp"

using namespace cove;
using namespace cove::gateway;
namespace fs = std::filesystem;

namespace {

class EchoTransport final : public Transport {
public:
    std::function<std::string(ProviderKind, const std::string&)> reply;
    std::atomic<int> sent{0};
    std::string send(ProviderKind kind, const std::string& payload) override {
        ++sent;
        return reply(kind, payload);
    }
};

fs::path temp_cache(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("cove_gateway_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

GatewayOptions opts(Mode m, const fs::path& cache) {
    GatewayOptions o;
    o.mode = m;
    o.cache_dir = cache;
    o.retry.initial_backoff = std::chrono::milliseconds(1);
    return o;
}

}  // namespace

TEST(Gateway, KindNamesRoundTrip) {
    for (auto k : all_provider_kinds()) EXPECT_EQ(kind_from_name(kind_name(k)), k);
    EXPECT_EQ(mode_from_name("replay"), Mode::Replay);
    EXPECT_FALSE(mode_from_name("offline"));
}

TEST(Gateway, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Gateway, CanonicalRequestIgnoresKeyOrder) {
    const auto a = ProviderRequest::make(ProviderKind::WebImageSearch, Json::parse(R"({"a":1,"b":"x"})"));
    const auto b = ProviderRequest::make(ProviderKind::WebImageSearch, Json::parse(R"({"b":"x","a":1})"));
    EXPECT_EQ(a.payload, b.payload);
    EXPECT_EQ(a.cache_key, b.cache_key);
    const auto c = ProviderRequest::make(ProviderKind::EntityLinking, Json::parse(R"({"a":1,"b":"x"})"));
    EXPECT_NE(a.cache_key, c.cache_key);
}

TEST(Gateway, RecordThenReplay) {
    const auto cache = temp_cache("record");
    auto t = std::make_shared<EchoTransport>();
    t->reply = [](ProviderKind, const std::string& p) {
        return Json{{"results", Json::array({{{"url", "https://www.bbc.co.uk/a"}, {"caption", Json::parse(p)["query"]}}})}}
            .dump();
    };
    {
        Gateway g(opts(Mode::Record, cache), t);
        const auto r = g.web_image_search("Flood in Jakarta");
        ASSERT_EQ(r.size(), 1u);
        EXPECT_EQ(r[0].domain, "bbc.co.uk");
        EXPECT_EQ(r[0].caption_field, "Flood in Jakarta");
        g.web_image_search("Flood in Jakarta");
        EXPECT_EQ(t->sent, 1);
        EXPECT_EQ(g.calls().get(ProviderKind::WebImageSearch), 2u);
        EXPECT_EQ(g.cache_hits().get(ProviderKind::WebImageSearch), 1u);
    }
    Gateway replay(opts(Mode::Replay, cache), t);
    EXPECT_EQ(replay.web_image_search("Flood in Jakarta").size(), 1u);
    EXPECT_THROW(replay.web_image_search("Another"), FixtureMissing);
    EXPECT_EQ(t->sent, 1);
    fs::remove_all(cache);
}

TEST(Gateway, LiveNeverWritesCache) {
    const auto cache = temp_cache("live");
    auto t = std::make_shared<EchoTransport>();
    t->reply = [](ProviderKind, const std::string&) { return R"({"vector":[1,0]})"; };
    Gateway g(opts(Mode::Live, cache), t);
    g.embed_text("a");
    g.embed_text("a");
    EXPECT_EQ(t->sent, 2);
    EXPECT_FALSE(fs::exists(cache / "text_embedding"));
}

TEST(Gateway, RetriesTransportErrorsOnly) {
    const auto cache = temp_cache("retry");
    auto t = std::make_shared<EchoTransport>();
    int failures = 2;
    t->reply = [&](ProviderKind, const std::string&) -> std::string {
        if (failures-- > 0) throw TransportError("timeout");
        return R"({"text":"ok"})";
    };
    Gateway g(opts(Mode::Live, cache), t);
    EXPECT_EQ(g.caption_image(ImageRef::url("https://e.org/i.jpg"), std::nullopt, "What?"), "ok");
    EXPECT_EQ(t->sent, 3);

    failures = 10;
    try {
        g.caption_image(ImageRef::url("https://e.org/i.jpg"), std::nullopt, "What?");
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_TRUE(e.retryable());
    }
    t->reply = [](ProviderKind, const std::string&) { return R"({"error":"image unreachable"})"; };
    t->sent = 0;
    try {
        g.embed_image(ImageRef::url("https://e.org/gone.jpg"));
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_FALSE(e.retryable());
    }
    EXPECT_EQ(t->sent, 1);
}

TEST(Gateway, EmbeddingDimensionIsConsistent) {
    const auto cache = temp_cache("dim");
    auto t = std::make_shared<EchoTransport>();
    t->reply = [](ProviderKind k, const std::string&) {
        return k == ProviderKind::TextEmbedding ? std::string(R"({"vector":[3,4]})") : R"({"vector":[1,0,0]})";
    };
    Gateway g(opts(Mode::Live, cache), t);
    const auto v = g.embed_text("x");
    EXPECT_NEAR(v[0], 0.6, 1e-12);  // unit-normalized
    EXPECT_EQ(g.embedding_dimension(), 2u);
    EXPECT_THROW(g.embed_image(ImageRef::url("https://e.org/a.jpg")), ConfigError);
}

TEST(Gateway, LocalHandlerBypassesTransport) {
    auto t = std::make_shared<EchoTransport>();
    t->reply = [](ProviderKind, const std::string&) -> std::string { throw TransportError("no"); };
    Gateway g(opts(Mode::Replay, temp_cache("local")), t);
    std::istringstream entries("Malta\tGPE\n# comment\nAngela Merkel\tPERSON\nMerkel\tPERSON\n");
    const auto tagger = GazetteerTagger::parse(entries);
    g.set_local_handler(ProviderKind::NamedEntityTagging, tagger.handler());
    const auto tags = g.tag_entities("Angela Merkel visits Malta in June 2017.");
    ASSERT_EQ(tags.size(), 3u);
    EXPECT_EQ(tags[0].text, "Angela Merkel");
    EXPECT_EQ(tags[1].label, "GPE");
    EXPECT_EQ(tags[2].label, "DATE");
    EXPECT_EQ(t->sent, 0);
}

TEST(Gateway, ConcurrentRecordIsSafe) {
    const auto cache = temp_cache("concurrent");
    auto t = std::make_shared<EchoTransport>();
    t->reply = [](ProviderKind, const std::string& p) { return Json{{"text", p}}.dump(); };
    Gateway g(opts(Mode::Record, cache), t);
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&] {
            for (int j = 0; j < 20; ++j)
                g.caption_image(ImageRef::url("https://e.org/" + std::to_string(j)), std::nullopt, "p");
        });
    for (auto& th : threads) th.join();
    EXPECT_EQ(g.calls().get(ProviderKind::VisionCaption), 160u);
    size_t files = 0;
    for (const auto& e : fs::directory_iterator(cache / "vision_caption")) files += e.is_regular_file();
    EXPECT_EQ(files, 20u);
    fs::remove_all(cache);
}

TEST(Gateway, RegistrableDomain) {
    EXPECT_EQ(registrable_domain("https://www.bbc.co.uk/news/x"), "bbc.co.uk");
    EXPECT_EQ(registrable_domain("http://edition.cnn.com:80/a?b"), "cnn.com");
    EXPECT_EQ(registrable_domain("https://reuters.com"), "reuters.com");
}
