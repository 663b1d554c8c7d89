#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cove/core/types.hpp"
#include "cove/metrics/geo.hpp"
#include "cove/metrics/scores.hpp"

namespace cove::metrics {

struct ItemScores {
    std::string headline;                  // metric name used in the headline table
    std::map<std::string, double> means;   // metric name -> corpus mean in [0,1]
    size_t evaluated = 0;                  // instances whose gold item is known
    size_t abstentions = 0;                // of those, predicted Unknown
};

struct EvalPair {
    std::string id;
    std::optional<ContextSummary> predicted;
    std::optional<ContextSummary> gold;
    std::optional<VeracityLabel> predicted_label;
    std::optional<VeracityLabel> gold_label;
};

struct EvalReport {
    std::array<ItemScores, 7> items;
    std::optional<VeracityScores> veracity;
    size_t instances = 0;
    std::vector<std::string> warnings;
};

/// Metric names per item, headline first.
std::vector<std::string> item_metric_names(ContextItemKind kind);

/// Scores one item. Unknown predictions score 0 on every metric.
std::map<std::string, double> score_item(ContextItemKind kind, const ContextItem& predicted, const ContextItem& gold,
                                         const Gazetteer* gazetteer);

/// Items whose gold value is Unknown are skipped. Location coordinates and
/// hierarchy metrics need a gazetteer; without one they score 0.
EvalReport evaluate(const std::vector<EvalPair>& pairs, const Gazetteer* gazetteer);

Json report_to_json(const EvalReport& report);
/// Headline table, extended table and veracity block, scores x100.
std::string render_report(const EvalReport& report);

}  // namespace cove::metrics
