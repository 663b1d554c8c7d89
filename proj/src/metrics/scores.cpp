#include "cove/metrics/scores.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "cove/core/errors.hpp"
#include "cove/core/text.hpp"

namespace cove::metrics {

std::optional<YearRange> parse_years(std::string_view text) {
    static const std::regex year_re(R"((^|[^0-9])([12][0-9]{3})(s?)(?![0-9]))");
    const std::string s(text);
    std::optional<YearRange> out;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), year_re); it != std::sregex_iterator(); ++it) {
        const int y = std::stoi((*it)[2].str());
        const int end = (*it)[3].length() > 0 && y % 10 == 0 ? y + 9 : y;
        if (!out)
            out = YearRange{y, end};
        else
            out = YearRange{std::min(out->lo, y), std::max(out->hi, end)};
    }
    return out;
}

double year_gap_delta(const YearRange& a, const YearRange& b) {
    int gap = 0;
    if (a.hi < b.lo)
        gap = b.lo - a.hi;
    else if (b.hi < a.lo)
        gap = a.lo - b.hi;
    return 1.0 / (1.0 + gap);
}

double date_delta(const std::optional<std::string>& prediction, std::string_view reference) {
    if (!prediction) return 0.0;
    const auto p = parse_years(*prediction);
    const auto r = parse_years(reference);
    if (!p || !r) return 0.0;
    return year_gap_delta(*p, *r);
}

Prf people_prf(const std::vector<std::string>& predicted, const std::vector<std::string>& reference) {
    std::set<std::string> p, r;
    for (const auto& n : predicted) {
        auto k = text::loose_key(n);
        if (!k.empty()) p.insert(std::move(k));
    }
    for (const auto& n : reference) {
        auto k = text::loose_key(n);
        if (!k.empty()) r.insert(std::move(k));
    }
    if (p.empty() && r.empty()) return {1, 1, 1};
    if (p.empty() || r.empty()) return {0, 0, 0};
    size_t common = 0;
    for (const auto& n : p) common += r.count(n);
    Prf out;
    out.precision = static_cast<double>(common) / static_cast<double>(p.size());
    out.recall = static_cast<double>(common) / static_cast<double>(r.size());
    if (common > 0) out.f1 = 2 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

namespace {

double f1(double tp, double fp, double fn) {
    const double denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2 * tp / denom;
}

}  // namespace

VeracityScores veracity_report(const std::vector<VeracityLabel>& predictions,
                               const std::vector<VeracityLabel>& references) {
    if (predictions.size() != references.size())
        throw PreconditionError("veracity_report: " + std::to_string(predictions.size()) + " predictions for " +
                                std::to_string(references.size()) + " references");
    VeracityScores s;
    s.count = predictions.size();
    if (s.count == 0) return s;
    double tp = 0, fn = 0, fp = 0, tn = 0;  // Accurate is the positive class
    for (size_t i = 0; i < predictions.size(); ++i) {
        const bool pred_acc = predictions[i] == VeracityLabel::Accurate;
        const bool ref_acc = references[i] == VeracityLabel::Accurate;
        if (pred_acc && ref_acc) ++tp;
        else if (!pred_acc && ref_acc) ++fn;
        else if (pred_acc && !ref_acc) ++fp;
        else ++tn;
    }
    s.accuracy = (tp + tn) / static_cast<double>(s.count);
    s.recall_accurate = tp + fn == 0 ? 0.0 : tp / (tp + fn);
    s.recall_ooc = tn + fp == 0 ? 0.0 : tn / (tn + fp);
    s.macro_f1 = (f1(tp, fp, fn) + f1(tn, fn, fp)) / 2;
    return s;
}

double fleiss_kappa(const std::vector<std::vector<int>>& ratings) {
    if (ratings.empty()) throw PreconditionError("fleiss_kappa: no items");
    const size_t k = ratings.front().size();
    long n = -1;
    for (const auto& row : ratings) {
        if (row.size() != k) throw PreconditionError("fleiss_kappa: ragged matrix");
        long sum = 0;
        for (int c : row) {
            if (c < 0) throw PreconditionError("fleiss_kappa: negative count");
            sum += c;
        }
        if (n < 0) n = sum;
        if (sum != n) throw PreconditionError("fleiss_kappa: items rated by different numbers of raters");
    }
    if (n < 2) throw PreconditionError("fleiss_kappa: need at least two raters");

    const double N = static_cast<double>(ratings.size());
    const double nd = static_cast<double>(n);
    std::vector<double> p(k, 0.0);
    double p_bar = 0;
    for (const auto& row : ratings) {
        double agree = 0;
        for (size_t j = 0; j < k; ++j) {
            p[j] += row[j];
            agree += static_cast<double>(row[j]) * (row[j] - 1);
        }
        p_bar += agree / (nd * (nd - 1));
    }
    p_bar /= N;
    double p_e = 0;
    for (double& pj : p) {
        pj /= N * nd;
        p_e += pj * pj;
    }
    if (std::abs(1.0 - p_e) < 1e-12) {
        if (std::abs(1.0 - p_bar) < 1e-12) return 1.0;
        throw PreconditionError("fleiss_kappa: degenerate agreement");
    }
    return (p_bar - p_e) / (1.0 - p_e);
}

}  // namespace cove::metrics
