#include "cove/context/context_qa.hpp"

#include <algorithm>
#include <numeric>

#include "cove/core/text.hpp"

namespace cove::context {

Json to_json(const EvidenceBundle& b) {
    Json wiki = Json::array();
    for (const auto& e : b.wiki_entities) wiki.push_back(wiki::to_json(e));
    Json visual = Json::array();
    for (const auto& v : b.visual_entities) visual.push_back({{"label", v.label}, {"score", v.score}});
    return Json{{"web", web::to_json(b.web)},
                {"visual_entities", visual},
                {"wiki_entities", wiki},
                {"auto_captions", caption::to_json(b.auto_captions)},
                {"merged_people", b.merged.people},
                {"merged_other", b.merged.other},
                {"warnings", b.warnings}};
}

const std::array<ItemSpec, 7>& item_specs() {
    using K = ContextItemKind;
    static const std::array<ItemSpec, 7> specs = {{
        {K::Source, "Who is the source of the image?", {"ORG"}},
        {K::Date, "When was the image taken?", {"DATE"}},
        {K::Location, "Where was the image taken?", {"FAC", "GPE", "LOC"}},
        {K::Motivation, "Why was the image taken?", {"EVENT", "GPE", "NORP", "ORG"}},
        {K::People, "Who is shown in the image?", {"PERSON"}},
        {K::Things, "Which animals, plants, buildings, or objects are shown in the image?", {"FAC", "LOC", "PRODUCT"}},
        {K::Event, "Which event is depicted in the image?", {"EVENT", "NORP"}},
    }};
    return specs;
}

const ItemSpec& spec_for(ContextItemKind kind) { return item_specs()[index_of(kind)]; }

size_t count_relevant(const std::vector<gateway::NamedEntity>& tagged, const ItemSpec& spec) {
    return static_cast<size_t>(std::count_if(tagged.begin(), tagged.end(), [&](const gateway::NamedEntity& e) {
        return spec.relevant_ne_labels.count(e.label) > 0;
    }));
}

size_t count_relevant_entities(gateway::Providers& providers, const std::string& t, const ItemSpec& spec,
                               std::vector<std::string>& warnings) {
    if (text::trim(t).empty()) return 0;
    try {
        return count_relevant(providers.tag_entities(t), spec);
    } catch (const gateway::FixtureMissing&) {
        throw;
    } catch (const Error& e) {
        warnings.push_back(std::string("entity tagging failed: ") + e.what());
        return 0;
    }
}

std::vector<size_t> rank_by_counts(const std::vector<size_t>& counts, size_t l) {
    if (l < 1) throw PreconditionError("l must be at least 1");
    std::vector<size_t> order(counts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return counts[a] > counts[b]; });
    if (order.size() > l) order.resize(l);
    return order;
}

std::vector<web::WebCaption> rank_web_captions(const std::vector<web::WebCaption>& captions,
                                               const std::vector<size_t>& counts, size_t l) {
    if (captions.size() != counts.size()) throw PreconditionError("one count per caption required");
    std::vector<web::WebCaption> out;
    for (size_t i : rank_by_counts(counts, l)) out.push_back(captions[i]);
    return out;
}

std::string clean_answer(std::string_view completion) {
    std::string_view rest = completion;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view line = text::trim(rest.substr(0, nl));
        rest = nl == std::string_view::npos ? std::string_view() : rest.substr(nl + 1);
        if (text::starts_with_icase(line, "answer:")) line = text::trim(line.substr(7));
        if (!line.empty()) return text::collapse_whitespace(line);
    }
    return {};
}

bool is_unknown_answer(std::string_view completion) {
    std::string s = clean_answer(completion);
    size_t i = 0;
    while (i < s.size() && (s[i] == '"' || s[i] == '\'' || s[i] == '(' || s[i] == '*')) ++i;
    return s.empty() || text::starts_with_icase(std::string_view(s).substr(i), "unknown");
}

namespace {

std::string render_captions(const std::vector<web::WebCaption>& captions) {
    if (captions.empty()) return "None";
    std::string out;
    for (size_t i = 0; i < captions.size(); ++i) {
        out += "\n" + std::to_string(i + 1) + ". " + captions[i].text;
    }
    return out;
}

std::string or_none(const std::string& s) { return text::trim(s).empty() ? "None" : s; }

}  // namespace

ItemPrediction predict_context_item(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                    const ItemSpec& spec, const std::vector<web::WebCaption>& ranked_captions,
                                    const std::string& merged_people, const std::string& merged_other,
                                    const std::vector<gateway::VisualEntity>& visual_entities) {
    ItemPrediction out;
    const bool any_evidence = !ranked_captions.empty() || !text::trim(merged_people).empty() ||
                              !text::trim(merged_other).empty() || !visual_entities.empty();
    if (!any_evidence) return out;

    std::vector<std::string> labels;
    for (const auto& c : ranked_captions) out.provenance.push_back("web:" + c.url);
    if (!text::trim(merged_other).empty()) out.provenance.emplace_back("caption:global");
    if (!text::trim(merged_people).empty()) out.provenance.emplace_back("caption:people");
    for (const auto& v : visual_entities) {
        labels.push_back(v.label);
        out.provenance.push_back("visual:" + v.label);
    }

    const auto prompt = library.get(prompts::names::kContextQa)
                            .render({{"web_captions", render_captions(ranked_captions)},
                                     {"caption_global", or_none(merged_other)},
                                     {"caption_people", or_none(merged_people)},
                                     {"visual_entities", labels.empty() ? "None" : text::join(labels, "; ")},
                                     {"question", std::string(spec.question)}});
    out.model_called = true;
    std::string completion;
    try {
        completion = providers.chat_complete(prompt);
    } catch (const gateway::ProviderError& e) {
        if (dynamic_cast<const gateway::FixtureMissing*>(&e)) throw;
        out.warnings.push_back(std::string(item_name(spec.kind)) + ": " + e.what());
        out.provenance.clear();
        return out;
    }
    if (is_unknown_answer(completion)) {
        out.provenance.clear();
        return out;
    }
    out.value = clean_answer(completion);
    return out;
}

ContextPrediction predict_context(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                  const EvidenceBundle& evidence, const PipelineConfig& config) {
    ContextPrediction out;
    const auto& captions = evidence.web.captions;
    std::vector<std::vector<gateway::NamedEntity>> tagged(captions.size());
    bool tagger_failed = false;
    for (size_t i = 0; i < captions.size() && !tagger_failed; ++i) {
        try {
            tagged[i] = providers.tag_entities(captions[i].text);
        } catch (const gateway::FixtureMissing&) {
            throw;
        } catch (const Error& e) {
            out.warnings.push_back(std::string("entity tagging failed: ") + e.what());
            tagger_failed = true;
            for (auto& t : tagged) t.clear();
        }
    }
    for (const auto& spec : item_specs()) {
        std::vector<size_t> counts;
        for (const auto& t : tagged) counts.push_back(count_relevant(t, spec));
        const auto ranked = rank_web_captions(captions, counts, static_cast<size_t>(config.web_caption_budget_l));
        auto item = predict_context_item(providers, library, spec, ranked, evidence.merged.people,
                                         evidence.merged.other, evidence.visual_entities);
        for (auto& w : item.warnings) out.warnings.push_back(std::move(w));
        if (item.value) out.summary.set(spec.kind, *item.value, std::move(item.provenance));
    }
    return out;
}

}  // namespace cove::context
