#include "cove/metrics/text_metrics.hpp"

#include <algorithm>
#include <utility>

#include "cove/core/text.hpp"

namespace cove::metrics {

namespace {

using Enum = std::vector<std::pair<size_t, std::string>>;
using Matches = std::vector<std::pair<size_t, size_t>>;

// Hypothesis words are visited right to left; each takes the right-most
// unmatched reference word that is equal to it.
Matches match_stage(Enum& hyp, Enum& ref) {
    Matches out;
    for (size_t i = hyp.size(); i-- > 0;) {
        for (size_t j = ref.size(); j-- > 0;) {
            if (hyp[i].second == ref[j].second) {
                out.emplace_back(hyp[i].first, ref[j].first);
                hyp.erase(hyp.begin() + static_cast<std::ptrdiff_t>(i));
                ref.erase(ref.begin() + static_cast<std::ptrdiff_t>(j));
                break;
            }
        }
    }
    return out;
}

Enum enumerate(const std::vector<std::string>& words) {
    Enum e;
    e.reserve(words.size());
    for (size_t i = 0; i < words.size(); ++i) e.emplace_back(i, words[i]);
    return e;
}

size_t count_chunks(const Matches& m) {
    if (m.empty()) return 0;
    size_t chunks = 1;
    for (size_t i = 0; i + 1 < m.size(); ++i)
        if (!(m[i + 1].first == m[i].first + 1 && m[i + 1].second == m[i].second + 1)) ++chunks;
    return chunks;
}

}  // namespace

MeteorDetail meteor_tokens(const std::vector<std::string>& hypothesis, const std::vector<std::string>& reference) {
    MeteorDetail d;
    Enum hyp = enumerate(hypothesis);
    Enum ref = enumerate(reference);
    Matches matches = match_stage(hyp, ref);

    for (auto& [_, w] : hyp) w = porter_stem(w);
    for (auto& [_, w] : ref) w = porter_stem(w);
    Matches stemmed = match_stage(hyp, ref);
    matches.insert(matches.end(), stemmed.begin(), stemmed.end());
    std::stable_sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    d.matches = matches.size();
    if (d.matches == 0) return d;
    d.chunks = count_chunks(matches);
    d.precision = static_cast<double>(d.matches) / static_cast<double>(hypothesis.size());
    d.recall = static_cast<double>(d.matches) / static_cast<double>(reference.size());
    d.fmean = d.precision * d.recall / (0.9 * d.precision + 0.1 * d.recall);
    const double frag = static_cast<double>(d.chunks) / static_cast<double>(d.matches);
    d.penalty = 0.5 * frag * frag * frag;
    d.score = (1.0 - d.penalty) * d.fmean;
    return d;
}

MeteorDetail meteor_detail(std::string_view prediction, std::string_view reference) {
    return meteor_tokens(text::word_tokens(prediction), text::word_tokens(reference));
}

double meteor(std::string_view prediction, std::string_view reference) {
    return meteor_detail(prediction, reference).score;
}

size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l(std::string_view prediction, std::string_view reference) {
    const auto p = text::word_tokens(prediction);
    const auto r = text::word_tokens(reference);
    if (p.empty() || r.empty()) return 0.0;
    const double lcs = static_cast<double>(lcs_length(p, r));
    if (lcs == 0) return 0.0;
    const double precision = lcs / static_cast<double>(p.size());
    const double recall = lcs / static_cast<double>(r.size());
    return 2 * precision * recall / (precision + recall);
}

double exact_match(const std::optional<std::string>& prediction, std::string_view reference) {
    if (!prediction) return 0.0;
    return text::casefold(text::trim(text::nfc(*prediction))) == text::casefold(text::trim(text::nfc(reference))) ? 1.0 : 0.0;
}

}  // namespace cove::metrics
