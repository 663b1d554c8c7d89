#include "cove/pipeline/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <future>
#include <thread>

#include "cove/caption/auto_caption.hpp"
#include "cove/context/context_qa.hpp"
#include "cove/core/errors.hpp"
#include "cove/core/instance_io.hpp"
#include "cove/core/text.hpp"
#include "cove/web/web_evidence.hpp"

namespace cove::pipeline {

using gateway::ProviderKind;

namespace {

// Provider failures degrade a step; a missing fixture fails the instance.
template <typename F>
void degrade(std::vector<std::string>& warnings, const std::string& what, F&& f) {
    try {
        f();
    } catch (const gateway::FixtureMissing&) {
        throw;
    } catch (const gateway::ProviderError& e) {
        warnings.push_back(what + ": " + e.what());
    }
}

// Waits for every future before rethrowing, so no task outlives its inputs.
void join_all(std::vector<std::future<void>>& futures) {
    std::exception_ptr first;
    for (auto& f : futures) {
        try {
            f.get();
        } catch (...) {
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace

size_t RunResult::hard_failures() const {
    size_t n = 0;
    for (const auto& r : instances) n += r.failed ? 1 : 0;
    return n;
}

context::EvidenceBundle collect_evidence(gateway::Providers& providers, const Instance& instance,
                                         const PipelineConfig& config, const Resources& resources) {
    const Toggles& t = config.toggles;
    context::EvidenceBundle bundle;

    const bool need_embedding = t.web_captions || t.wikipedia_entities;
    std::shared_future<std::optional<gateway::Vector>> embedding;
    std::vector<std::string> embed_warnings;
    if (need_embedding) {
        embedding = std::async(std::launch::async, [&]() -> std::optional<gateway::Vector> {
                        try {
                            return providers.embed_image(instance.image);
                        } catch (const gateway::FixtureMissing&) {
                            throw;
                        } catch (const gateway::ProviderError& e) {
                            embed_warnings.push_back(std::string("image embedding: ") + e.what());
                            return std::nullopt;
                        }
                    }).share();
    }

    std::vector<std::string> web_warnings, wiki_warnings;
    std::vector<std::future<void>> tasks;

    if (t.web_captions || t.visual_entities) {
        tasks.push_back(std::async(std::launch::async, [&] {
            gateway::ReverseSearchResult reverse;
            degrade(web_warnings, "reverse image search", [&] { reverse = providers.reverse_image_search(instance.image); });
            if (t.visual_entities) bundle.visual_entities = web::filter_visual_entities(reverse.visual_entities, config);
            if (!t.web_captions) return;
            std::vector<gateway::WebResult> forward;
            degrade(web_warnings, "web image search", [&] { forward = providers.web_image_search(instance.caption); });
            const auto& emb = embedding.get();
            if (!emb) {
                web_warnings.push_back("web captions skipped: no image embedding");
                return;
            }
            bundle.web = web::collect_web_captions(providers, *emb, reverse, forward, config);
        }));
    }
    if (t.wikipedia_entities) {
        tasks.push_back(std::async(std::launch::async, [&] {
            auto candidates = wiki::extract_caption_entities(providers, instance.caption, wiki_warnings);
            const auto& emb = embedding.get();
            if (!emb) {
                wiki_warnings.push_back("wikipedia entities skipped: no image embedding");
                return;
            }
            if (resources.entity_index && !resources.entity_index->empty()) {
                if (resources.entity_index->dimension() != emb->size())
                    throw ConfigError("entity index dimension " + std::to_string(resources.entity_index->dimension()) +
                                      " does not match image embedding dimension " + std::to_string(emb->size()));
                auto knn = wiki::knn_entities(*emb, *resources.entity_index, static_cast<size_t>(config.knn_k));
                candidates.insert(candidates.end(), knn.begin(), knn.end());
            }
            bundle.wiki_entities = wiki::retain_entities(providers, wiki::merge_candidates(std::move(candidates)),
                                                         instance.image, *emb, config, wiki_warnings);
        }));
    }
    std::vector<std::string> auto_warnings;
    if (t.automated_captions) {
        tasks.push_back(std::async(std::launch::async, [&] {
            std::vector<gateway::DetectedObject> detections;
            degrade(auto_warnings, "object detection", [&] { detections = providers.detect_objects(instance.image); });
            bundle.auto_captions = caption::generate_automated_captions(providers, instance.image, detections, config);
        }));
    }

    join_all(tasks);
    if (need_embedding) embedding.wait();

    bundle.merged = caption::merge_evidence_captions(bundle.auto_captions, bundle.wiki_entities);
    // fixed order keeps the artifacts independent of task scheduling
    for (auto* src : {&embed_warnings, &web_warnings, &bundle.web.warnings, &wiki_warnings, &auto_warnings,
                      &bundle.auto_captions.warnings})
        bundle.warnings.insert(bundle.warnings.end(), src->begin(), src->end());
    return bundle;
}

std::string render_evidence_text(const context::EvidenceBundle& evidence) {
    std::vector<std::string> lines;
    if (!evidence.web.captions.empty()) {
        lines.push_back("Web captions:");
        for (size_t i = 0; i < evidence.web.captions.size(); ++i)
            lines.push_back(std::to_string(i + 1) + ". " + evidence.web.captions[i].text);
    }
    if (!evidence.merged.other.empty()) lines.push_back("Image description: " + evidence.merged.other);
    if (!evidence.merged.people.empty()) lines.push_back("People: " + evidence.merged.people);
    if (!evidence.visual_entities.empty()) {
        std::vector<std::string> labels;
        for (const auto& v : evidence.visual_entities) labels.push_back(v.label);
        lines.push_back("Visual entities: " + text::join(labels, "; "));
    }
    return text::join(lines, "\n");
}

InstanceResult process_instance(gateway::Providers& providers, const Instance& instance, const PipelineConfig& config,
                                const Resources& resources) {
    const auto start = std::chrono::steady_clock::now();
    gateway::CountingProviders counting(providers);
    InstanceResult r;
    r.id = instance.id;

    auto finish = [&] {
        r.calls = counting.counts();
        r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };

    try {
        const auto validation = validate_instance(instance, SignatureProbe{});
        if (!validation.valid()) {
            r.failed = true;
            r.error = text::join(validation.hard_failures, "; ");
            finish();
            return r;
        }
        r.warnings = validation.soft_flags;

        const Toggles& t = config.toggles;
        r.evidence = collect_evidence(counting, instance, config, resources);

        if (t.veracity_rules && t.web_captions) r.rule_verdict = web::apply_veracity_rules(instance.caption, r.evidence.web, config);

        if (r.rule_verdict && !config.context_for_rule_verdicts) {
            r.context_skipped = true;
        } else if (t.context_prediction) {
            auto predicted = context::predict_context(counting, *resources.prompts, r.evidence, config);
            r.context = std::move(predicted.summary);
            r.warnings.insert(r.warnings.end(), predicted.warnings.begin(), predicted.warnings.end());
            if (t.knowledge_gap) {
                auto gap = gap::complete_knowledge_gaps(counting, *resources.prompts, r.context, config);
                r.context = std::move(gap.context);
                r.gap_sessions = std::move(gap.sessions);
            }
        }

        if (r.rule_verdict) {
            r.verdict = r.rule_verdict;
        } else {
            std::string block;
            if (!t.veracity_prediction)
                block = veracity::render_context_block(ContextSummary{});
            else if (t.context_prediction)
                block = veracity::render_context_block(r.context);
            else
                block = render_evidence_text(r.evidence);
            const bool with_web = !r.evidence.web.captions.empty();
            try {
                r.raw_verdict = veracity::predict_raw(counting, *resources.prompts, block, instance.caption, with_web,
                                                      config.veracity_backend);
            } catch (const gateway::FixtureMissing&) {
                throw;
            } catch (const gateway::ProviderError& e) {
                veracity::RawVerdict unknown;
                unknown.warnings.push_back(std::string("veracity prediction: ") + e.what());
                r.raw_verdict = unknown;
            }
            r.warnings.insert(r.warnings.end(), r.raw_verdict->warnings.begin(), r.raw_verdict->warnings.end());
        }
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
    }
    finish();
    return r;
}

RunResult run_batch(gateway::Providers& providers, const std::vector<Instance>& instances,
                    const PipelineConfig& config, const Resources& resources) {
    if (!resources.prompts) throw ConfigError("run_batch: no prompt library");
    config.validate();

    RunResult out;
    out.instances.resize(instances.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < instances.size(); i = next++)
            out.instances[i] = process_instance(providers, instances[i], config, resources);
    };
    const size_t n = std::min<size_t>(static_cast<size_t>(config.workers), std::max<size_t>(instances.size(), 1));
    std::vector<std::thread> pool;
    for (size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // Second pass: Unknown verdicts take the majority of decided labels.
    std::vector<VeracityLabel> decided;
    for (const auto& r : out.instances) {
        if (r.failed) continue;
        if (r.rule_verdict)
            decided.push_back(r.rule_verdict->label);
        else if (r.raw_verdict)
            if (auto l = veracity::decided_label(r.raw_verdict->value)) decided.push_back(*l);
    }
    out.majority = veracity::majority_label(decided);
    for (auto& r : out.instances) {
        if (!r.failed && !r.rule_verdict && r.raw_verdict) r.verdict = veracity::map_verdict(*r.raw_verdict, out.majority);
        for (auto kind : gateway::all_provider_kinds())
            for (size_t c = 0; c < r.calls.get(kind); ++c) out.totals.add(kind);
    }
    return out;
}

std::set<ProviderKind> component_providers(std::string_view component) {
    if (component == "web_captions")
        return {ProviderKind::ReverseImageSearch, ProviderKind::WebImageSearch, ProviderKind::ImageEmbedding};
    if (component == "visual_entities") return {ProviderKind::ReverseImageSearch};
    if (component == "wikipedia_entities")
        return {ProviderKind::ImageEmbedding, ProviderKind::TextEmbedding, ProviderKind::EntityLinking,
                ProviderKind::FaceSimilarity, ProviderKind::WikiPageImages};
    if (component == "automated_captions") return {ProviderKind::ObjectDetection, ProviderKind::VisionCaption};
    if (component == "context_prediction") return {ProviderKind::NamedEntityTagging};
    if (component == "knowledge_gap") return {ProviderKind::PassageRetrieval};
    return {};
}

std::set<ProviderKind> disabled_providers(const Toggles& t) {
    const std::vector<std::pair<std::string_view, bool>> components = {
        {"web_captions", t.web_captions},          {"visual_entities", t.visual_entities},
        {"wikipedia_entities", t.wikipedia_entities}, {"automated_captions", t.automated_captions},
        {"context_prediction", t.context_prediction}, {"knowledge_gap", t.knowledge_gap && t.context_prediction}};
    std::set<ProviderKind> used, all;
    for (const auto& [name, on] : components) {
        for (auto k : component_providers(name)) {
            all.insert(k);
            if (on) used.insert(k);
        }
    }
    std::set<ProviderKind> out;
    for (auto k : all)
        if (!used.count(k)) out.insert(k);
    return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json evidence_json(const InstanceResult& r) {
    Json j = context::to_json(r.evidence);
    j["id"] = r.id;
    return j;
}

Json context_json(const InstanceResult& r) {
    Json j;
    j["id"] = r.id;
    j["context"] = r.context;
    Json sessions = Json::array();
    for (const auto& s : r.gap_sessions) sessions.push_back(gap::to_json(s));
    j["knowledge_gap"] = std::move(sessions);
    j["skipped"] = r.context_skipped ? Json("decided by veracity rule") : Json(nullptr);
    j["warnings"] = r.warnings;
    return j;
}

Json verdict_json(const InstanceResult& r) {
    Json j;
    j["id"] = r.id;
    if (r.verdict) j["verdict"] = *r.verdict;
    else j["verdict"] = nullptr;
    if (r.raw_verdict) {
        j["first_pass"] = {{"raw", raw_name(r.raw_verdict->value)}, {"reasoning", r.raw_verdict->reasoning}};
    } else {
        j["first_pass"] = nullptr;
    }
    return j;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    const auto tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, p);
}

// Instance ids become file names; anything outside a safe set is replaced.
std::string file_stem(const std::string& id) {
    std::string s;
    for (char c : id) s.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ? c : '_');
    if (s.empty() || s == "." || s == "..") s = "_" + s;
    return s;
}

}  // namespace

void write_run_directory(const std::filesystem::path& out, const RunResult& result, const PipelineConfig& config,
                         const RunInfo& info) {
    std::filesystem::create_directories(out);
    const Json config_json = config;
    write_file(out / "config.json", dump_json(config_json));

    Json entries = Json::array();
    for (const auto& r : result.instances) {
        Json e;
        e["id"] = r.id;
        e["status"] = r.failed ? "failed" : "ok";
        e["elapsed_ms"] = r.elapsed_ms;
        e["provider_calls"] = r.calls.to_json();
        if (r.failed) {
            e["error"] = r.error;
        } else {
            const std::string stem = file_stem(r.id);
            const std::string ev = "evidence/" + stem + ".json", cx = "context/" + stem + ".json",
                              vd = "verdicts/" + stem + ".json";
            write_file(out / ev, dump_json(evidence_json(r)));
            write_file(out / cx, dump_json(context_json(r)));
            write_file(out / vd, dump_json(verdict_json(r)));
            e["artifacts"] = {{"evidence", ev}, {"context", cx}, {"verdict", vd}};
        }
        entries.push_back(std::move(e));
    }

    Json manifest;
    manifest["run_id"] = info.run_id;
    manifest["mode"] = info.mode;
    manifest["input"] = info.input;
    manifest["config"] = config_json;
    manifest["instances"] = std::move(entries);
    manifest["provider_calls"] = result.totals.to_json();
    manifest["majority_label"] = result.majority ? Json(label_name(*result.majority)) : Json(nullptr);
    manifest["hard_failures"] = result.hard_failures();
    manifest["timing"] = {{"started_at", info.started_at}, {"elapsed_ms", info.elapsed_ms}};
    write_file(out / "manifest.json", dump_json(manifest));
}

}  // namespace cove::pipeline
