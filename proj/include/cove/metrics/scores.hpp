#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cove/core/types.hpp"

namespace cove::metrics {

struct YearRange {
    int lo = 0;
    int hi = 0;
    bool operator==(const YearRange&) const = default;
};

/// Years from 4-digit tokens (1000-2999). Several years span [min, max];
/// a decade like "1990s" spans ten years.
std::optional<YearRange> parse_years(std::string_view text);

/// 1/(1 + gap in years); overlapping ranges have gap 0. Unparseable or Unknown scores 0.
double date_delta(const std::optional<std::string>& prediction, std::string_view reference);
double year_gap_delta(const YearRange& a, const YearRange& b);

struct Prf {
    double recall = 0;
    double precision = 0;
    double f1 = 0;
};

/// Names are compared after case folding and whitespace collapse.
Prf people_prf(const std::vector<std::string>& predicted, const std::vector<std::string>& reference);

struct VeracityScores {
    double accuracy = 0;
    double recall_accurate = 0;
    double recall_ooc = 0;
    double macro_f1 = 0;
    size_t count = 0;
};

/// Throws PreconditionError on length mismatch.
VeracityScores veracity_report(const std::vector<VeracityLabel>& predictions,
                               const std::vector<VeracityLabel>& references);

/// Items x categories count matrix; every row must sum to the same n >= 2.
double fleiss_kappa(const std::vector<std::vector<int>>& ratings);

}  // namespace cove::metrics
