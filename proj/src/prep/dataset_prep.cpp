#include "cove/prep/dataset_prep.hpp"

#include <set>

#include "cove/core/text.hpp"

namespace cove::prep {

namespace {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> s = {
        "a", "an", "the", "of", "in", "on", "at", "to", "for", "and", "or", "by", "with", "from", "is", "are",
        "was", "were", "be", "as", "it", "its", "this", "that", "these", "those", "during", "after", "before"};
    return s;
}

bool is_sentinel(std::string_view s) {
    std::string k = text::loose_key(s);
    while (!k.empty() && (k.back() == '.' || k.back() == '"')) k.pop_back();
    while (!k.empty() && k.front() == '"') k.erase(0, 1);
    return k == kNotEnoughInformation;
}

// Lists become comma-joined text; sentinel entries inside a list are dropped.
std::optional<std::string> value_text(const Json& v) {
    if (v.is_null()) return std::nullopt;
    if (v.is_string()) {
        auto s = text::collapse_whitespace(v.get<std::string>());
        if (s.empty() || is_sentinel(s)) return std::nullopt;
        return s;
    }
    if (v.is_array()) {
        std::vector<std::string> parts;
        for (const auto& e : v)
            if (auto t = value_text(e)) parts.push_back(*t);
        if (parts.empty()) return std::nullopt;
        return text::join(parts, ", ");
    }
    if (v.is_number()) return v.dump();
    return std::nullopt;
}

bool has_support(std::string_view value, const std::set<std::string>& caption_tokens) {
    for (const auto& t : text::word_tokens(value))
        if (!stopwords().count(t) && caption_tokens.count(t)) return true;
    return false;
}

std::string first_line(std::string_view s) {
    size_t start = 0;
    while (start < s.size()) {
        size_t end = s.find('\n', start);
        if (end == std::string_view::npos) end = s.size();
        auto line = text::collapse_whitespace(s.substr(start, end - start));
        if (!line.empty()) return line;
        start = end + 1;
    }
    return {};
}

std::string strip_quotes(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

DecompositionResult parse_decomposition(std::string_view completion, std::string_view caption) {
    DecompositionResult out;
    out.raw_completion = std::string(completion);
    const size_t open = completion.find('{');
    const size_t close = completion.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw DecompositionError("decomposition is not a key-value structure", out.raw_completion);
    Json j = Json::parse(completion.substr(open, close - open + 1), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw DecompositionError("decomposition is not a key-value structure", out.raw_completion);

    Json lowered = Json::object();
    for (auto& [k, v] : j.items()) lowered[text::to_lower_ascii(k)] = v;

    const std::vector<std::pair<std::string, ContextItemKind>> keys = {
        {"source", ContextItemKind::Source},         {"date", ContextItemKind::Date},
        {"location", ContextItemKind::Location},     {"motivation", ContextItemKind::Motivation},
        {"people", ContextItemKind::People},         {"object", ContextItemKind::Things},
        {"things", ContextItemKind::Things},         {"event", ContextItemKind::Event}};
    std::set<std::string> caption_tokens;
    for (auto& t : text::word_tokens(caption)) caption_tokens.insert(std::move(t));

    for (const auto& [key, kind] : keys) {
        if (!lowered.contains(key) || out.gold.known(kind)) continue;
        auto value = value_text(lowered[key]);
        if (!value) continue;
        if (kind == ContextItemKind::People && lowered[key].is_array()) {
            std::vector<std::string> names;
            for (const auto& e : lowered[key])
                if (auto t = value_text(e)) names.push_back(*t);
            out.gold.set_people(std::move(names));
        } else {
            out.gold.set(kind, *value);
        }
        if (!has_support(*value, caption_tokens)) out.unsupported.push_back(kind);
    }
    return out;
}

DecompositionResult decompose_caption(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                      std::string_view caption) {
    if (text::collapse_whitespace(caption).empty()) throw PreconditionError("decompose_caption: empty caption");
    const auto prompt = library.get(prompts::names::kDecompose).render({{"caption", std::string(caption)}});
    return parse_decomposition(providers.chat_complete(prompt), caption);
}

bool caption_eligible(const ContextSummary& gold) {
    return gold.known(ContextItemKind::Motivation) &&
           (gold.known(ContextItemKind::Date) || gold.known(ContextItemKind::Location));
}

size_t word_count(std::string_view s) { return text::split_whitespace(s).size(); }

GeneratedCaption generate_accurate_caption(gateway::Providers& providers, const prompts::PromptLibrary& library,
                                           const ContextSummary& gold) {
    if (!caption_eligible(gold))
        throw PreconditionError("ineligible instance: needs motivation and a date or location");
    auto slot = [&](ContextItemKind k) {
        return gold.known(k) ? *gold.item(k).value : std::string(kNotEnoughInformation);
    };
    auto prompt = library.get(prompts::names::kAccurateCaption)
                      .render({{"date", slot(ContextItemKind::Date)},
                               {"location", slot(ContextItemKind::Location)},
                               {"motivation", slot(ContextItemKind::Motivation)}});
    GeneratedCaption out;
    out.caption = strip_quotes(first_line(providers.chat_complete(prompt)));
    out.attempts = 1;
    if (word_count(out.caption) > kMaxCaptionWords) {
        prompt.user += "\n\nThe sentence must have at most 30 words.";
        out.caption = strip_quotes(first_line(providers.chat_complete(prompt)));
        out.attempts = 2;
        if (word_count(out.caption) > kMaxCaptionWords)
            out.warnings.push_back("caption has " + std::to_string(word_count(out.caption)) + " words (limit 30)");
    }
    return out;
}

}  // namespace cove::prep
