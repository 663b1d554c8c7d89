#include <gtest/gtest.h>

#include "cove/prep/dataset_prep.hpp"
#include "scripted_providers.hpp"

using namespace cove;
using cove::testing::ScriptedProviders;
using K = ContextItemKind;

namespace {
const prompts::PromptLibrary& library() {
    static const auto lib = prompts::PromptLibrary::embedded();
    return lib;
}
}  // namespace

TEST(Prep, ParseDecomposition) {
    const std::string caption = "Angela Merkel speaks in Berlin in 2017.";
    const auto r = prep::parse_decomposition(
        R"(Here you go: {"source": "not enough information", "date": "2017", "location": "Berlin",
            "people": "Angela Merkel", "object": "A podium", "motivation": "not enough information"})",
        caption);
    EXPECT_FALSE(r.gold.known(K::Source));
    EXPECT_EQ(r.gold.item(K::Date).value, "2017");
    EXPECT_EQ(r.gold.item(K::Things).value, "A podium");
    EXPECT_FALSE(r.gold.known(K::Event));
    EXPECT_EQ(r.unsupported, (std::vector<K>{K::Things}));
    EXPECT_THROW(prep::parse_decomposition("no structure here", caption), prep::DecompositionError);
    EXPECT_THROW(prep::parse_decomposition("[1, 2]", caption), prep::DecompositionError);
}

TEST(Prep, Eligibility) {
    ContextSummary c;
    c.set(K::Motivation, "Reporting");
    EXPECT_FALSE(prep::caption_eligible(c));
    c.set(K::Location, "Paris");
    EXPECT_TRUE(prep::caption_eligible(c));
    c.clear(K::Motivation);
    EXPECT_FALSE(prep::caption_eligible(c));
}

TEST(Prep, WordCount) {
    EXPECT_EQ(prep::word_count("  one two\tthree "), 3u);
    EXPECT_EQ(prep::word_count(""), 0u);
}

TEST(Prep, CaptionRetryOnce) {
    ContextSummary gold;
    gold.set(K::Date, "2017");
    gold.set(K::Motivation, "Reporting");
    ScriptedProviders p;
    std::vector<std::string> users;
    std::string long_reply;
    for (int i = 0; i < 35; ++i) long_reply += "word ";
    p.chat = [&](const gateway::ChatPrompt& prompt) {
        users.push_back(prompt.user);
        return users.size() == 1 ? long_reply : std::string("A short sentence.");
    };
    const auto g = prep::generate_accurate_caption(p, library(), gold);
    EXPECT_EQ(g.caption, "A short sentence.");
    EXPECT_EQ(g.attempts, 2u);
    ASSERT_EQ(users.size(), 2u);
    EXPECT_NE(users[0].find("Date : 2017"), std::string::npos);
    EXPECT_NE(users[1].find("at most 30 words"), std::string::npos);

    users.clear();
    p.chat = [&](const gateway::ChatPrompt& prompt) {
        users.push_back(prompt.user);
        return long_reply;
    };
    const auto kept = prep::generate_accurate_caption(p, library(), gold);
    EXPECT_EQ(kept.attempts, 2u);
    EXPECT_FALSE(kept.warnings.empty());

    EXPECT_THROW(prep::generate_accurate_caption(p, library(), ContextSummary{}), PreconditionError);
}
