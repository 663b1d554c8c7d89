#include <gtest/gtest.h>

#include "cove/context/context_qa.hpp"
#include "cove/knowledge/knowledge_gap.hpp"
#include "cove/veracity/veracity.hpp"
#include "scripted_providers.hpp"

using namespace cove;
using cove::testing::ScriptedProviders;
using K = ContextItemKind;

namespace {

const prompts::PromptLibrary& library() {
    static const auto lib = prompts::PromptLibrary::embedded();
    return lib;
}

web::WebCaption web_caption(std::string text, std::string url) {
    web::WebCaption c;
    c.text = std::move(text);
    c.url = std::move(url);
    return c;
}

}  // namespace

TEST(ContextQa, QuestionsAndLabelSets) {
    EXPECT_EQ(context::spec_for(K::Date).question, "When was the image taken?");
    EXPECT_EQ(context::spec_for(K::Things).question,
              "Which animals, plants, buildings, or objects are shown in the image?");
    EXPECT_TRUE(context::spec_for(K::Location).relevant_ne_labels.count("GPE"));
    EXPECT_FALSE(context::spec_for(K::People).relevant_ne_labels.count("GPE"));
}

TEST(ContextQa, RankingIsStableAndBounded) {
    EXPECT_EQ(context::rank_by_counts({0, 2, 1, 2, 0}, 3), (std::vector<size_t>{1, 3, 2}));
    EXPECT_EQ(context::rank_by_counts({0, 0}, 10), (std::vector<size_t>{0, 1}));
    EXPECT_THROW(context::rank_by_counts({1}, 0), PreconditionError);
    EXPECT_THROW(context::rank_web_captions({web_caption("a", "u")}, {}, 1), PreconditionError);
}

TEST(ContextQa, AnswerCleaning) {
    EXPECT_EQ(context::clean_answer("\n Answer:   Valletta,  Malta\nbecause"), "Valletta, Malta");
    EXPECT_TRUE(context::is_unknown_answer("Unknown."));
    EXPECT_TRUE(context::is_unknown_answer("Answer: \"unknown\""));
    EXPECT_TRUE(context::is_unknown_answer("  "));
    EXPECT_FALSE(context::is_unknown_answer("Known to be Paris"));
}

TEST(ContextQa, NoEvidenceMeansNoCall) {
    ScriptedProviders p;
    const auto r = context::predict_context_item(p, library(), context::spec_for(K::Date), {}, "", " ", {});
    EXPECT_FALSE(r.model_called);
    EXPECT_FALSE(r.value);
}

TEST(ContextQa, PredictsPerItemWithProvenance) {
    ScriptedProviders p;
    std::vector<std::string> users;
    p.tag = [](const std::string& t) {
        std::vector<gateway::NamedEntity> out;
        if (t.find("Malta") != std::string::npos) out.push_back({"Malta", "GPE"});
        return out;
    };
    p.chat = [&](const gateway::ChatPrompt& prompt) -> std::string {
        users.push_back(prompt.user);
        if (prompt.user.find("Where was the image taken?") != std::string::npos) return "Answer: Valletta, Malta";
        return "Unknown";
    };
    context::EvidenceBundle ev;
    ev.web.captions = {web_caption("Crowd in a square", "https://a.org"),
                       web_caption("Protest in Valletta, Malta", "https://b.org")};
    const auto pred = context::predict_context(p, library(), ev, PipelineConfig{});
    EXPECT_EQ(users.size(), 7u);
    EXPECT_EQ(pred.summary.known_count(), 1u);
    const auto& loc = pred.summary.item(K::Location);
    EXPECT_EQ(loc.value, "Valletta, Malta");
    EXPECT_EQ(loc.provenance, (std::vector<std::string>{"web:https://b.org", "web:https://a.org"}));
    // The Location prompt lists the GPE-bearing caption first.
    const auto& loc_user = users[index_of(K::Location)];
    EXPECT_LT(loc_user.find("Protest in Valletta"), loc_user.find("Crowd in a square"));
}

TEST(ContextQa, ChatFailureLeavesItemUnknown) {
    ScriptedProviders p;
    p.tag = [](const std::string&) { return std::vector<gateway::NamedEntity>{}; };
    context::EvidenceBundle ev;
    ev.merged.other = "A crowd";
    const auto pred = context::predict_context(p, library(), ev, PipelineConfig{});
    EXPECT_EQ(pred.summary.known_count(), 0u);
    EXPECT_EQ(pred.warnings.size(), 7u);
}

TEST(Knowledge, QuestionParsing) {
    EXPECT_EQ(gap::parse_questions("1. When did X happen?\n2) Where is Y?\n- Who?\n4. Extra?"),
              (std::vector<std::string>{"When did X happen?", "Where is Y?", "Who?"}));
    EXPECT_TRUE(gap::parse_questions(std::string(gap::kNoQuestionsSentinel) + ".").empty());
}

TEST(Knowledge, RenderKnownItems) {
    ContextSummary c;
    c.set(K::Location, "Paris");
    c.set(K::Event, "A parade");
    EXPECT_EQ(gap::render_known_items(c), "location: Paris\nevent: A parade");
}

TEST(Knowledge, PassageRelevanceGate) {
    ScriptedProviders p;
    double relevance = 20.0;
    int chats = 0;
    p.passages = [&](const std::string&) {
        return std::vector<gateway::WikiPassage>{{"Text.", "Page", relevance}};
    };
    p.chat = [&](const gateway::ChatPrompt&) {
        ++chats;
        return std::string("1999");
    };
    std::vector<std::string> warnings;
    auto qa = gap::answer_question(p, library(), "When?", gap::Target::Date, PipelineConfig{}, warnings);
    EXPECT_FALSE(qa.answer);
    EXPECT_EQ(chats, 0);
    relevance = 20.5;
    qa = gap::answer_question(p, library(), "When?", gap::Target::Date, PipelineConfig{}, warnings);
    EXPECT_EQ(qa.answer, "1999");
    EXPECT_EQ(qa.passage_title, "Page");
}

TEST(Knowledge, GenerateQuestionsRequiresTrigger) {
    ScriptedProviders p;
    EXPECT_THROW(gap::generate_questions(p, library(), ContextSummary{}, gap::Target::Date), PreconditionError);
}

TEST(Knowledge, DateUpdateCanEnableLocationSession) {
    // Date known? no. Location known, event known -> date session first. Afterwards
    // both are known, so no location session follows.
    ContextSummary c;
    c.set(K::Location, "Christchurch");
    c.set(K::Event, "Earthquake");
    ScriptedProviders p;
    p.passages = [](const std::string&) { return std::vector<gateway::WikiPassage>{{"In 2011.", "Quake", 50}}; };
    p.chat = [](const gateway::ChatPrompt& prompt) -> std::string {
        if (prompt.user.find("Generated questions") != std::string::npos) return "When did the earthquake happen?";
        if (prompt.user.find("Wikipedia knowledge") != std::string::npos) return "February 2011";
        return "February 2011";
    };
    const auto r = gap::complete_knowledge_gaps(p, library(), c, PipelineConfig{});
    ASSERT_EQ(r.sessions.size(), 1u);
    EXPECT_EQ(r.sessions[0].outcome, "February 2011");
    EXPECT_EQ(r.context.item(K::Date).provenance, (std::vector<std::string>{"wiki:Quake"}));
    EXPECT_EQ(r.context.item(K::Location), c.item(K::Location));
}

TEST(Veracity, ContextBlock) {
    ContextSummary c;
    c.set(K::People, "Barack Obama; Angela Merkel");
    c.set(K::Date, "2015");
    EXPECT_EQ(veracity::render_context_block(c),
              "source: unknown\ndate: 2015\nlocation: unknown\nmotivation: unknown\n"
              "people: Barack Obama, Angela Merkel\nthings: unknown\nevent: unknown");
}

TEST(Veracity, PromptCarriesContextAndCaption) {
    const auto p = veracity::build_veracity_prompt(library(), "date: 2015", "Leaders meet", true);
    EXPECT_NE(p.user.find("date: 2015"), std::string::npos);
    EXPECT_NE(p.user.find("Leaders meet"), std::string::npos);
    EXPECT_NE(veracity::build_veracity_prompt(library(), "x", "y", false).demonstrations.size(), p.demonstrations.size());
}

TEST(Veracity, ParseVerdictForms) {
    using veracity::parse_verdict;
    auto v = parse_verdict("Reasoning: The dates differ.\nAnswer: out-of-context");
    EXPECT_EQ(v.value, RawLabel::OOC);
    EXPECT_EQ(v.reasoning, "The dates differ.");
    EXPECT_EQ(parse_verdict("Answer: accurate\nExtra: Answer: Unknown, probably accurate").value,
              RawLabel::LeanAccurate);
    EXPECT_EQ(parse_verdict("Answer: Out-of-context.").value, RawLabel::OOC);
    EXPECT_EQ(parse_verdict("answer: unknown").value, RawLabel::Unknown);
    auto missing = parse_verdict("I cannot tell.");
    EXPECT_EQ(missing.value, RawLabel::Unknown);
    EXPECT_FALSE(missing.warnings.empty());
    auto odd = parse_verdict("Answer: perhaps");
    EXPECT_EQ(odd.value, RawLabel::Unknown);
    EXPECT_FALSE(odd.warnings.empty());
}

TEST(Veracity, ClassifierBackend) {
    ScriptedProviders p;
    p.classify = [](const std::string& ctx, const std::string&) {
        return ctx.find("2015") != std::string::npos ? VeracityLabel::Accurate : VeracityLabel::OOC;
    };
    EXPECT_EQ(veracity::predict_raw(p, library(), "date: 2015", "c", true, VeracityBackend::Classifier).value,
              RawLabel::Accurate);
    EXPECT_EQ(veracity::predict_raw(p, library(), "date: 1990", "c", true, VeracityBackend::Classifier).value,
              RawLabel::OOC);
}

TEST(Veracity, MajorityAndMapping) {
    EXPECT_FALSE(veracity::majority_label({}));
    veracity::RawVerdict unknown;
    EXPECT_EQ(veracity::map_verdict(unknown, VeracityLabel::Accurate).label, VeracityLabel::Accurate);
    EXPECT_EQ(veracity::map_verdict(unknown, std::nullopt).label, VeracityLabel::OOC);
    EXPECT_NO_THROW(veracity::map_verdict(unknown, std::nullopt).check());
}
