#include "cove/veracity/veracity.hpp"

#include <array>
#include <map>

#include "cove/core/text.hpp"

namespace cove::veracity {

std::string_view choice_text(RawLabel r) {
    switch (r) {
        case RawLabel::Accurate: return "accurate";
        case RawLabel::LeanAccurate: return "unknown, probably accurate";
        case RawLabel::Unknown: return "unknown";
        case RawLabel::LeanOOC: return "unknown, probably out-of-context";
        case RawLabel::OOC: return "out-of-context";
    }
    return "unknown";
}

std::string render_context_block(const ContextSummary& context) {
    std::vector<std::string> lines;
    for (auto k : kAllItemKinds) {
        const auto& item = context.item(k);
        std::string value = "unknown";
        if (item.known()) value = k == ContextItemKind::People ? text::join(item.names, ", ") : *item.value;
        lines.push_back(std::string(item_name(k)) + ": " + value);
    }
    return text::join(lines, "\n");
}

gateway::ChatPrompt build_veracity_prompt(const prompts::PromptLibrary& library, const std::string& context_block,
                                          const std::string& caption, bool with_web_captions) {
    const auto name = with_web_captions ? prompts::names::kVeracityWeb : prompts::names::kVeracityNoWeb;
    return library.get(name).render({{"context", context_block}, {"caption", caption}});
}

namespace {

std::string normalize_choice(std::string_view s) {
    std::string t = text::to_lower_ascii(text::collapse_whitespace(s));
    auto strip = [](std::string& x, const auto& junk) {
        bool changed = true;
        while (changed && !x.empty()) {
            changed = false;
            for (auto j : junk) {
                if (x.size() >= j.size() && x.compare(0, j.size(), j) == 0) {
                    x.erase(0, j.size());
                    changed = true;
                }
                if (x.size() >= j.size() && x.compare(x.size() - j.size(), j.size(), j) == 0) {
                    x.erase(x.size() - j.size());
                    changed = true;
                }
            }
        }
    };
    static const std::array<std::string_view, 9> junk = {"\"", "'", "\xE2\x80\x9C", "\xE2\x80\x9D", ".", "*", " ", "`", "!"};
    strip(t, junk);
    // Accept spaced spelling of out-of-context.
    for (auto pos = t.find("out of context"); pos != std::string::npos; pos = t.find("out of context"))
        t.replace(pos, 14, "out-of-context");
    return t;
}

size_t find_last_answer(std::string_view s) {
    const std::string lower = text::to_lower_ascii(s);
    return lower.rfind("answer:");
}

}  // namespace

RawVerdict parse_verdict(std::string_view completion) {
    RawVerdict out;
    const size_t pos = find_last_answer(completion);
    if (pos == std::string::npos) {
        out.reasoning = std::string(text::trim(completion));
        out.warnings.emplace_back("no answer line in veracity completion");
        return out;
    }
    std::string_view reasoning = text::trim(completion.substr(0, pos));
    if (text::starts_with_icase(reasoning, "reasoning:")) reasoning = text::trim(reasoning.substr(10));
    out.reasoning = std::string(reasoning);
    std::string_view answer = completion.substr(pos + 7);
    answer = text::trim(answer);
    answer = answer.substr(0, answer.find('\n'));
    const std::string norm = normalize_choice(answer);
    static const std::array<RawLabel, 5> by_length = {RawLabel::LeanOOC, RawLabel::LeanAccurate, RawLabel::OOC,
                                                      RawLabel::Accurate, RawLabel::Unknown};
    for (RawLabel r : by_length) {
        const std::string_view c = choice_text(r);
        if (norm == c) {
            out.value = r;
            return out;
        }
    }
    for (RawLabel r : by_length) {
        const std::string_view c = choice_text(r);
        if (norm.size() > c.size() && norm.compare(0, c.size(), c) == 0 &&
            !std::isalnum(static_cast<unsigned char>(norm[c.size()])) && norm[c.size()] != ',') {
            out.value = r;
            return out;
        }
    }
    out.value = RawLabel::Unknown;
    out.warnings.push_back("unrecognized veracity answer '" + std::string(answer) + "'");
    return out;
}

std::optional<VeracityLabel> majority_label(const std::vector<VeracityLabel>& labels) {
    size_t acc = 0, ooc = 0;
    for (auto l : labels) (l == VeracityLabel::Accurate ? acc : ooc)++;
    if (acc == ooc) return std::nullopt;
    return acc > ooc ? VeracityLabel::Accurate : VeracityLabel::OOC;
}

std::optional<VeracityLabel> decided_label(RawLabel r) {
    switch (r) {
        case RawLabel::Accurate:
        case RawLabel::LeanAccurate: return VeracityLabel::Accurate;
        case RawLabel::OOC:
        case RawLabel::LeanOOC: return VeracityLabel::OOC;
        case RawLabel::Unknown: return std::nullopt;
    }
    return std::nullopt;
}

VeracityVerdict map_verdict(const RawVerdict& raw, std::optional<VeracityLabel> majority) {
    VeracityLabel label = decided_label(raw.value).value_or(majority.value_or(VeracityLabel::OOC));
    return VeracityVerdict::from_model(raw.value, label, raw.reasoning);
}

RawVerdict predict_raw(gateway::Providers& providers, const prompts::PromptLibrary& library,
                       const std::string& context_block, const std::string& caption, bool with_web_captions,
                       VeracityBackend backend) {
    if (backend == VeracityBackend::Classifier) {
        RawVerdict out;
        out.value = providers.classify_veracity(context_block, caption) == VeracityLabel::Accurate ? RawLabel::Accurate
                                                                                                   : RawLabel::OOC;
        return out;
    }
    return parse_verdict(
        providers.chat_complete(build_veracity_prompt(library, context_block, caption, with_web_captions)));
}

}  // namespace cove::veracity
