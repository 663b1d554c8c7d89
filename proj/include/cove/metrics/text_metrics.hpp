#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cove::metrics {

/// Porter stemmer, original 1980 rule set. Input is lower-cased first.
std::string porter_stem(std::string_view word);

struct MeteorDetail {
    size_t matches = 0;
    size_t chunks = 0;
    double precision = 0;
    double recall = 0;
    double fmean = 0;
    double penalty = 0;
    double score = 0;
};

/// Unigram Meteor with exact and stem matching stages:
/// F_mean = 10PR/(R + 9P), penalty = 0.5 (chunks/matches)^3.
MeteorDetail meteor_detail(std::string_view prediction, std::string_view reference);
double meteor(std::string_view prediction, std::string_view reference);

/// Same computation over pre-tokenized input.
MeteorDetail meteor_tokens(const std::vector<std::string>& hypothesis, const std::vector<std::string>& reference);

/// LCS-based F1 over word tokens.
double rouge_l(std::string_view prediction, std::string_view reference);
size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// 1 iff NFC + trim + case-fold forms are equal; Unknown predictions score 0.
double exact_match(const std::optional<std::string>& prediction, std::string_view reference);

}  // namespace cove::metrics
