#include "cove/knowledge/knowledge_gap.hpp"

#include "cove/context/context_qa.hpp"
#include "cove/core/text.hpp"

namespace cove::gap {

std::string_view target_name(Target t) { return t == Target::Date ? "date" : "location"; }

ContextItemKind target_item(Target t) { return t == Target::Date ? ContextItemKind::Date : ContextItemKind::Location; }

bool should_trigger(Target target, const ContextSummary& c) {
    using K = ContextItemKind;
    const bool support = c.known(K::People) || c.known(K::Event) || c.known(K::Motivation);
    if (target == Target::Date) return !c.known(K::Date) && c.known(K::Location) && support;
    return !c.known(K::Location) && c.known(K::Date) && support;
}

std::string render_known_items(const ContextSummary& context) {
    std::vector<std::string> lines;
    for (auto k : kAllItemKinds)
        if (context.known(k)) lines.push_back(std::string(item_name(k)) + ": " + *context.item(k).value);
    return text::join(lines, "\n");
}

std::vector<std::string> parse_questions(std::string_view completion) {
    std::vector<std::string> out;
    if (text::starts_with_icase(text::trim(completion), kNoQuestionsSentinel)) return out;
    std::string_view rest = completion;
    while (!rest.empty() && out.size() < 3) {
        const auto nl = rest.find('\n');
        std::string_view line = text::trim(rest.substr(0, nl));
        rest = nl == std::string_view::npos ? std::string_view() : rest.substr(nl + 1);
        // Drop list markers such as "1.", "2)", "-", "*".
        size_t i = 0;
        while (i < line.size() && (std::isdigit(static_cast<unsigned char>(line[i])) || line[i] == '.' ||
                                   line[i] == ')' || line[i] == '-' || line[i] == '*'))
            ++i;
        line = text::trim(line.substr(i));
        if (line.empty() || text::starts_with_icase(line, kNoQuestionsSentinel)) continue;
        out.push_back(text::collapse_whitespace(line));
    }
    return out;
}

std::vector<std::string> generate_questions(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                            const ContextSummary& context, Target target) {
    if (!should_trigger(target, context)) throw PreconditionError("knowledge gap not triggered");
    const auto name = target == Target::Date ? prompts::names::kQuestionsDate : prompts::names::kQuestionsLocation;
    try {
        return parse_questions(
            providers.chat_complete(library.get(name).render({{"context", render_known_items(context)}})));
    } catch (const gateway::ProviderError& e) {
        if (dynamic_cast<const gateway::FixtureMissing*>(&e)) throw;
        return {};
    }
}

QaPair answer_question(gateway::Providers& providers, const prompts::PromptLibrary& library,
                       const std::string& question, Target target, const PipelineConfig& config,
                       std::vector<std::string>& warnings) {
    QaPair qa{question, std::nullopt, {}};
    std::vector<gateway::WikiPassage> passages;
    try {
        passages = providers.retrieve_passages(question);
    } catch (const gateway::FixtureMissing&) {
        throw;
    } catch (const Error& e) {
        warnings.push_back(std::string("passage retrieval failed: ") + e.what());
        return qa;
    }
    if (passages.empty() || !(passages.front().relevance > config.wiki_passage_relevance_min)) return qa;
    const auto& top = passages.front();
    qa.passage_title = top.page_title;
    const auto name = target == Target::Date ? prompts::names::kAnswerDate : prompts::names::kAnswerLocation;
    const std::string passage = top.page_title.empty() ? top.text : top.page_title + ": " + top.text;
    try {
        const std::string completion =
            providers.chat_complete(library.get(name).render({{"passage", passage}, {"question", question}}));
        if (!context::is_unknown_answer(completion)) qa.answer = context::clean_answer(completion);
    } catch (const gateway::ProviderError& e) {
        if (dynamic_cast<const gateway::FixtureMissing*>(&e)) throw;
        warnings.push_back(std::string("question answering failed: ") + e.what());
    }
    return qa;
}

ContextSummary validate_and_update(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                   const ContextSummary& context, GapSession& session) {
    session.outcome.reset();
    std::vector<std::string> knowledge, titles;
    for (const auto& qa : session.qa_pairs) {
        if (!qa.answer) continue;
        knowledge.push_back("Q: " + qa.question + "\nA: " + *qa.answer);
        if (!qa.passage_title.empty()) titles.push_back("wiki:" + qa.passage_title);
    }
    if (knowledge.empty()) return context;
    const auto name = session.target == Target::Date ? prompts::names::kValidateDate : prompts::names::kValidateLocation;
    std::string completion;
    try {
        completion = providers.chat_complete(library.get(name).render(
            {{"context", render_known_items(context)}, {"knowledge", text::join(knowledge, "\n")}}));
    } catch (const gateway::ProviderError& e) {
        if (dynamic_cast<const gateway::FixtureMissing*>(&e)) throw;
        session.warnings.push_back(std::string("validation failed: ") + e.what());
        return context;
    }
    if (context::is_unknown_answer(completion)) return context;
    ContextSummary updated = context;
    updated.set(target_item(session.target), context::clean_answer(completion), titles);
    if (updated.known(target_item(session.target))) session.outcome = *updated.item(target_item(session.target)).value;
    return updated;
}

GapResult complete_knowledge_gaps(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                  const ContextSummary& context, const PipelineConfig& config) {
    GapResult result{context, {}};
    for (Target target : {Target::Date, Target::Location}) {
        if (!should_trigger(target, result.context)) continue;
        GapSession session;
        session.target = target;
        session.questions = generate_questions(providers, library, result.context, target);
        for (const auto& q : session.questions)
            session.qa_pairs.push_back(answer_question(providers, library, q, target, config, session.warnings));
        result.context = validate_and_update(providers, library, result.context, session);
        result.sessions.push_back(std::move(session));
    }
    return result;
}

Json to_json(const GapSession& s) {
    Json qa = Json::array();
    for (const auto& p : s.qa_pairs) {
        Json j{{"question", p.question}, {"passage_title", p.passage_title}};
        j["answer"] = p.answer ? Json(*p.answer) : Json(nullptr);
        qa.push_back(std::move(j));
    }
    Json j{{"target", target_name(s.target)}, {"questions", s.questions}, {"qa_pairs", qa}, {"warnings", s.warnings}};
    j["outcome"] = s.outcome ? Json(*s.outcome) : Json(nullptr);
    return j;
}

}  // namespace cove::gap
