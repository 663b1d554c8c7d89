#include "cove/metrics/eval.hpp"

#include <cstdio>
#include <sstream>

#include "cove/core/text.hpp"
#include "cove/metrics/text_metrics.hpp"

namespace cove::metrics {

namespace {

std::vector<std::string> names_of(const ContextItem& item) {
    if (!item.names.empty()) return item.names;
    if (item.value) return parse_people(*item.value);
    return {};
}

bool same_text(const std::string& a, const std::string& b) { return text::loose_key(a) == text::loose_key(b); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
    return buf;
}

}  // namespace

std::vector<std::string> item_metric_names(ContextItemKind kind) {
    switch (kind) {
        case ContextItemKind::Source: return {"M", "RL"};
        case ContextItemKind::Date: return {"Delta", "EM"};
        case ContextItemKind::Location: return {"CODelta", "RL", "M", "HLDelta"};
        case ContextItemKind::Motivation: return {"M", "RL"};
        case ContextItemKind::People: return {"F1", "R", "P"};
        case ContextItemKind::Things: return {"M", "RL"};
        case ContextItemKind::Event: return {"M", "RL"};
    }
    return {};
}

std::map<std::string, double> score_item(ContextItemKind kind, const ContextItem& predicted, const ContextItem& gold,
                                         const Gazetteer* gazetteer) {
    std::map<std::string, double> out;
    for (const auto& name : item_metric_names(kind)) out[name] = 0.0;
    if (!predicted.value || !gold.value) return out;
    const std::string& p = *predicted.value;
    const std::string& g = *gold.value;

    switch (kind) {
        case ContextItemKind::Date:
            out["Delta"] = same_text(p, g) ? 1.0 : date_delta(p, g);
            out["EM"] = exact_match(p, g);
            break;
        case ContextItemKind::Location: {
            out["RL"] = rouge_l(p, g);
            out["M"] = meteor(p, g);
            std::optional<GeoRecord> pr, gr;
            if (gazetteer) {
                pr = gazetteer->resolve(p);
                gr = gazetteer->resolve(g);
            }
            if (pr && gr) {
                out["CODelta"] = coordinates_delta(*pr, *gr);
                out["HLDelta"] = hierarchy_delta(*pr, *gr);
            } else if (!pr && !gr && same_text(p, g)) {
                // identical text that the gazetteer cannot place
                out["CODelta"] = 1.0;
                out["HLDelta"] = 1.0;
            }
            break;
        }
        case ContextItemKind::People: {
            const Prf prf = people_prf(names_of(predicted), names_of(gold));
            out["F1"] = prf.f1;
            out["R"] = prf.recall;
            out["P"] = prf.precision;
            break;
        }
        default:
            out["M"] = meteor(p, g);
            out["RL"] = rouge_l(p, g);
            break;
    }
    return out;
}

EvalReport evaluate(const std::vector<EvalPair>& pairs, const Gazetteer* gazetteer) {
    EvalReport report;
    for (auto kind : kAllItemKinds) {
        auto& item = report.items[index_of(kind)];
        const auto names = item_metric_names(kind);
        item.headline = names.front();
        for (const auto& n : names) item.means[n] = 0.0;
    }

    std::vector<VeracityLabel> preds, refs;
    for (const auto& pair : pairs) {
        ++report.instances;
        if (pair.gold) {
            const ContextSummary empty;
            const ContextSummary& predicted = pair.predicted ? *pair.predicted : empty;
            if (!pair.predicted) report.warnings.push_back(pair.id + ": no context prediction, scored as abstention");
            for (auto kind : kAllItemKinds) {
                const auto& gold_item = pair.gold->item(kind);
                if (!gold_item.known()) continue;
                auto& item = report.items[index_of(kind)];
                ++item.evaluated;
                const auto& pred_item = predicted.item(kind);
                if (!pred_item.known()) ++item.abstentions;
                for (const auto& [name, v] : score_item(kind, pred_item, gold_item, gazetteer)) item.means[name] += v;
            }
        }
        if (pair.gold_label) {
            if (pair.predicted_label) {
                preds.push_back(*pair.predicted_label);
                refs.push_back(*pair.gold_label);
            } else {
                report.warnings.push_back(pair.id + ": no verdict, excluded from veracity scores");
            }
        }
    }
    for (auto& item : report.items)
        if (item.evaluated > 0)
            for (auto& [_, v] : item.means) v /= static_cast<double>(item.evaluated);
    if (!refs.empty()) report.veracity = veracity_report(preds, refs);
    return report;
}

Json report_to_json(const EvalReport& report) {
    Json j;
    j["instances"] = report.instances;
    Json items = Json::object();
    for (auto kind : kAllItemKinds) {
        const auto& item = report.items[index_of(kind)];
        Json ji;
        ji["headline"] = item.headline;
        ji["headline_score"] = item.means.at(item.headline);
        ji["metrics"] = item.means;
        ji["evaluated"] = item.evaluated;
        ji["abstentions"] = item.abstentions;
        items[std::string(item_name(kind))] = std::move(ji);
    }
    j["items"] = std::move(items);
    if (report.veracity) {
        const auto& v = *report.veracity;
        j["veracity"] = {{"A", v.accuracy}, {"R_ACC", v.recall_accurate}, {"R_OOC", v.recall_ooc},
                         {"MacroF1", v.macro_f1}, {"count", v.count}};
    } else {
        j["veracity"] = nullptr;
    }
    j["warnings"] = report.warnings;
    return j;
}

std::string render_report(const EvalReport& report) {
    std::ostringstream out;
    out << "Context items (" << report.instances << " instances)\n";
    std::string header, row;
    for (auto kind : kAllItemKinds) {
        const auto& item = report.items[index_of(kind)];
        std::string col = std::string(item_name(kind)) + " " + item.headline;
        std::string val = fmt(item.means.at(item.headline));
        const size_t w = std::max(col.size(), val.size()) + 2;
        col.resize(w, ' ');
        val.resize(w, ' ');
        header += col;
        row += val;
    }
    out << header << "\n" << row << "\n\nExtended\n";
    for (auto kind : kAllItemKinds) {
        const auto& item = report.items[index_of(kind)];
        out << item_name(kind) << ":";
        for (const auto& name : item_metric_names(kind)) out << " " << name << "=" << fmt(item.means.at(name));
        out << " (n=" << item.evaluated << ", unknown=" << item.abstentions << ")\n";
    }
    if (report.veracity) {
        const auto& v = *report.veracity;
        out << "\nVeracity (n=" << v.count << ")\nA      R_ACC  R_OOC  MacroF1\n";
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-6.1f %-6.1f %-6.1f %-6.1f\n", v.accuracy * 100, v.recall_accurate * 100,
                      v.recall_ooc * 100, v.macro_f1 * 100);
        out << buf;
    }
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";
    return out.str();
}

}  // namespace cove::metrics
