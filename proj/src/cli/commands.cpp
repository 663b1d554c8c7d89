#include "cove/cli/commands.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "cove/core/errors.hpp"
#include "cove/core/instance_io.hpp"
#include "cove/gateway/gazetteer_tagger.hpp"
#include "cove/metrics/eval.hpp"
#include "cove/pipeline/pipeline.hpp"
#include "cove/prep/dataset_prep.hpp"

namespace cove::cli {

std::string OfflineTransport::send(gateway::ProviderKind kind, const std::string&) {
    throw gateway::ProviderError(kind, false, "network access is disabled in replay mode");
}

std::unique_ptr<gateway::Gateway> make_gateway(const ProviderSetup& setup, const PipelineConfig& config) {
    const auto mode = gateway::mode_from_name(setup.mode);
    if (!mode) throw ConfigError("unknown mode '" + setup.mode + "' (expected live, record or replay)");
    gateway::GatewayOptions opts;
    opts.mode = *mode;
    opts.cache_dir = setup.cache;
    opts.max_parallel = setup.max_parallel;
    std::shared_ptr<gateway::Transport> transport = setup.transport;
    if (*mode == gateway::Mode::Replay)
        transport = std::make_shared<OfflineTransport>();
    else if (!transport)
        transport = std::make_shared<gateway::HttpTransport>();
    auto gw = std::make_unique<gateway::Gateway>(opts, std::move(transport));
    if (!config.ner_gazetteer.empty())
        gw->set_local_handler(gateway::ProviderKind::NamedEntityTagging,
                              gateway::GazetteerTagger::load(config.ner_gazetteer).handler());
    return gw;
}

namespace {

std::string utc_stamp(const char* format) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, format);
    return ss.str();
}

PipelineConfig effective_config(const RunOptions& o) {
    PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
    if (o.toggle_set) cfg.toggles = *o.toggle_set;
    if (!o.toggles.empty()) {
        const bool bits = o.toggles.size() == 8 && o.toggles.find_first_not_of("01") == std::string::npos;
        cfg.toggles = bits ? toggles_from_row(o.toggles) : apply_toggle_overrides(cfg.toggles, o.toggles);
    }
    if (o.workers) cfg.workers = *o.workers;
    cfg.validate();
    return cfg;
}

prompts::PromptLibrary load_prompts(const PipelineConfig& cfg) {
    return cfg.prompts_dir.empty() ? prompts::PromptLibrary::embedded()
                                   : prompts::PromptLibrary::with_overrides(cfg.prompts_dir);
}

ParsedInstances read_instances(const fs::path& file, std::ostream& log) {
    auto parsed = load_instances(file);
    for (const auto& d : parsed.diagnostics) log << file.string() << ":" << d.line << ": " << d.message << "\n";
    return parsed;
}

Json read_json(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + file.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError(file.string() + ": " + e.what());
    }
}

void write_text(const fs::path& file, const std::string& content) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + file.string());
    out << content;
}

std::string toggle_bits(const Toggles& t) {
    std::string s;
    for (bool b : {t.web_captions, t.visual_entities, t.wikipedia_entities, t.automated_captions, t.knowledge_gap,
                   t.context_prediction, t.veracity_prediction, t.veracity_rules})
        s.push_back(b ? '1' : '0');
    return s;
}

}  // namespace

Toggles toggles_from_row(std::string_view bits) {
    if (bits.size() != 8 || bits.find_first_not_of("01") != std::string_view::npos)
        throw ConfigError("ablation row must be 8 binary digits, got '" + std::string(bits) + "'");
    Toggles t;
    t.web_captions = bits[0] == '1';
    t.visual_entities = bits[1] == '1';
    t.wikipedia_entities = bits[2] == '1';
    t.automated_captions = bits[3] == '1';
    t.knowledge_gap = bits[4] == '1';
    t.context_prediction = bits[5] == '1';
    t.veracity_prediction = bits[6] == '1';
    t.veracity_rules = bits[7] == '1';
    return t;
}

std::vector<AblationRow> standard_ablation_rows() {
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"full", "11111111"},          {"rules_only", "10000001"},     {"no_rules", "11111110"},
        {"no_context", "11111011"},    {"no_wiki_auto", "11000111"},   {"no_visual_kg_rules", "10110110"},
        {"no_web", "01110111"},        {"wiki_auto_ctx", "00110110"},  {"wiki_auto_kg_ctx", "00111110"}};
    std::vector<AblationRow> out;
    for (const auto& [name, bits] : rows) out.push_back({name, toggles_from_row(bits)});
    return out;
}

std::vector<AblationRow> load_ablation_plan(const fs::path& file) {
    const Json plan = read_json(file);
    if (!plan.is_array()) throw ConfigError("ablation plan must be a JSON list");
    std::vector<AblationRow> out;
    for (const auto& entry : plan) {
        AblationRow row;
        if (entry.is_string()) {
            row.name = "row" + std::to_string(out.size() + 1);
            row.toggles = toggles_from_row(entry.get<std::string>());
        } else if (entry.is_object()) {
            row.name = entry.value("name", "row" + std::to_string(out.size() + 1));
            if (entry.contains("row"))
                row.toggles = toggles_from_row(entry["row"].get<std::string>());
            else if (entry.contains("toggles"))
                row.toggles = entry["toggles"].get<Toggles>();
            else
                throw ConfigError("ablation plan entry '" + row.name + "' needs \"row\" or \"toggles\"");
        } else {
            throw ConfigError("ablation plan entries must be strings or objects");
        }
        out.push_back(std::move(row));
    }
    return out;
}

int cmd_run(const RunOptions& o, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    const PipelineConfig cfg = effective_config(o);
    const auto library = load_prompts(cfg);
    std::optional<wiki::EntityIndex> index;
    if (!cfg.entity_index.empty()) index = wiki::EntityIndex::load(cfg.entity_index);
    auto gw = make_gateway(o.providers, cfg);

    const auto parsed = read_instances(o.input, log);
    pipeline::Resources res{&library, index ? &*index : nullptr};
    const auto result = pipeline::run_batch(*gw, parsed.instances, cfg, res);

    pipeline::RunInfo info;
    info.run_id = o.run_id.empty() ? "run-" + utc_stamp("%Y%m%dT%H%M%SZ") : o.run_id;
    info.mode = o.providers.mode;
    info.input = o.input.string();
    info.started_at = utc_stamp("%Y-%m-%dT%H:%M:%SZ");
    info.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    pipeline::write_run_directory(o.out, result, cfg, info);

    size_t rules = 0;
    for (const auto& r : result.instances) {
        if (r.failed) log << "failed " << r.id << ": " << r.error << "\n";
        if (r.rule_verdict) ++rules;
    }
    const size_t failures = result.hard_failures() + parsed.diagnostics.size();
    log << result.instances.size() << " instances, " << rules << " decided by rules, " << failures
        << " hard failures -> " << o.out.string() << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_eval(const EvalOptions& o, std::ostream& log) {
    const Json manifest = read_json(o.predictions / "manifest.json");
    std::map<std::string, metrics::EvalPair> by_id;
    std::vector<std::string> order;
    std::vector<std::string> warnings;

    for (const auto& e : manifest.at("instances")) {
        metrics::EvalPair pair;
        pair.id = e.at("id").get<std::string>();
        if (e.value("status", "") == "ok") {
            const auto& art = e.at("artifacts");
            pair.predicted = read_json(o.predictions / art.at("context").get<std::string>()).at("context").get<ContextSummary>();
            const Json v = read_json(o.predictions / art.at("verdict").get<std::string>());
            if (!v.at("verdict").is_null()) pair.predicted_label = v.at("verdict").get<VeracityVerdict>().label;
        }
        order.push_back(pair.id);
        by_id.emplace(pair.id, std::move(pair));
    }

    const auto gold = read_instances(o.gold, log);
    std::vector<metrics::EvalPair> pairs;
    std::set<std::string> gold_ids;
    for (const auto& inst : gold.instances) {
        gold_ids.insert(inst.id);
        auto it = by_id.find(inst.id);
        if (it == by_id.end()) {
            warnings.push_back(inst.id + ": no prediction, excluded");
            continue;
        }
        auto pair = it->second;
        pair.gold = inst.gold_context;
        pair.gold_label = inst.gold_label;
        pairs.push_back(std::move(pair));
    }
    for (const auto& id : order)
        if (!gold_ids.count(id)) warnings.push_back(id + ": no gold record, excluded");

    std::optional<metrics::Gazetteer> gaz;
    if (!o.gazetteer.empty()) gaz = metrics::Gazetteer::load(o.gazetteer);
    auto report = metrics::evaluate(pairs, gaz ? &*gaz : nullptr);
    report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());

    const fs::path out = o.out.empty() ? o.predictions : o.out;
    write_text(out / "eval_report.json", pipeline::dump_json(metrics::report_to_json(report)));
    const std::string table = metrics::render_report(report);
    write_text(out / "eval_report.txt", table);
    log << table;
    return gold.diagnostics.empty() ? 0 : 1;
}

int cmd_ablate(const AblateOptions& o, std::ostream& log) {
    const auto rows = o.plan.empty() ? standard_ablation_rows() : load_ablation_plan(o.plan);
    const fs::path gold = o.gold.empty() ? o.run.input : o.gold;
    Json grid = Json::array();
    std::ostringstream table;
    table << std::left << std::setw(22) << "row" << std::setw(10) << "flags";
    for (auto kind : kAllItemKinds) table << std::setw(12) << item_name(kind);
    table << std::setw(8) << "A" << std::setw(8) << "R_ACC" << std::setw(8) << "R_OOC" << std::setw(8) << "F1"
          << "rules\n";

    int exit_code = 0;
    for (const auto& row : rows) {
        RunOptions run = o.run;
        run.toggle_set = row.toggles;
        run.toggles.clear();
        run.out = o.run.out / row.name;
        if (run.run_id.empty()) run.run_id = row.name;
        std::ostringstream sink;
        if (cmd_run(run, sink) != 0) exit_code = 1;
        log << row.name << ": " << sink.str();
        std::ostringstream eval_log;
        if (cmd_eval({run.out, gold, o.gazetteer, run.out}, eval_log) != 0) exit_code = 1;

        const Json report = read_json(run.out / "eval_report.json");
        const Json manifest = read_json(run.out / "manifest.json");
        size_t rule_count = 0;
        for (const auto& e : manifest.at("instances")) {
            if (e.value("status", "") != "ok") continue;
            const Json v = read_json(run.out / e.at("artifacts").at("verdict").get<std::string>());
            if (!v.at("verdict").is_null() && v.at("verdict").value("stage", "") != "model") ++rule_count;
        }
        grid.push_back({{"name", row.name},
                        {"flags", toggle_bits(row.toggles)},
                        {"toggles", row.toggles},
                        {"report", report},
                        {"rule_verdicts", rule_count},
                        {"provider_calls", manifest.at("provider_calls")}});

        auto pct = [](double v) {
            std::ostringstream s;
            s << std::fixed << std::setprecision(1) << v * 100;
            return s.str();
        };
        table << std::setw(22) << row.name << std::setw(10) << toggle_bits(row.toggles);
        for (auto kind : kAllItemKinds) table << std::setw(12) << pct(report["items"][std::string(item_name(kind))]["headline_score"].get<double>());
        if (report["veracity"].is_null()) {
            table << std::setw(32) << "-";
        } else {
            const auto& v = report["veracity"];
            table << std::setw(8) << pct(v["A"].get<double>()) << std::setw(8) << pct(v["R_ACC"].get<double>())
                  << std::setw(8) << pct(v["R_OOC"].get<double>()) << std::setw(8) << pct(v["MacroF1"].get<double>());
        }
        table << rule_count << "\n";
    }
    write_text(o.run.out / "ablation.json", pipeline::dump_json(grid));
    write_text(o.run.out / "ablation.txt", table.str());
    log << table.str();
    return exit_code;
}

int cmd_prepare(const PrepareOptions& o, std::ostream& log) {
    if (o.task != "decompose" && o.task != "generate_captions")
        throw ConfigError("unknown prepare task '" + o.task + "' (expected decompose or generate_captions)");
    const PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
    const auto library = load_prompts(cfg);
    auto gw = make_gateway(o.providers, cfg);
    const auto parsed = read_instances(o.input, log);

    std::ostringstream out;
    size_t failures = parsed.diagnostics.size();
    for (const auto& inst : parsed.instances) {
        Json rec;
        rec["id"] = inst.id;
        try {
            if (o.task == "decompose") {
                const auto d = prep::decompose_caption(*gw, library, inst.caption);
                rec["gold_context"] = d.gold;
                Json flagged = Json::array();
                for (auto k : d.unsupported) flagged.push_back(item_name(k));
                rec["unsupported_items"] = std::move(flagged);
                rec["raw_completion"] = d.raw_completion;
            } else {
                if (!inst.gold_context) {
                    rec["skipped"] = "no gold context";
                } else if (!prep::caption_eligible(*inst.gold_context)) {
                    rec["skipped"] = "ineligible instance: needs motivation and a date or location";
                } else {
                    const auto c = prep::generate_accurate_caption(*gw, library, *inst.gold_context);
                    rec["caption"] = c.caption;
                    rec["attempts"] = c.attempts;
                    rec["warnings"] = c.warnings;
                }
                if (rec.contains("skipped")) log << "skipped " << inst.id << ": " << rec["skipped"].get<std::string>() << "\n";
            }
        } catch (const prep::DecompositionError& e) {
            rec["error"] = e.what();
            rec["raw_completion"] = e.raw_completion;
            ++failures;
        } catch (const Error& e) {
            rec["error"] = e.what();
            ++failures;
        }
        if (rec.contains("error")) log << "failed " << inst.id << ": " << rec["error"].get<std::string>() << "\n";
        out << rec.dump() << "\n";
    }
    write_text(o.out, out.str());
    log << parsed.instances.size() << " records -> " << o.out.string() << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace cove::cli
