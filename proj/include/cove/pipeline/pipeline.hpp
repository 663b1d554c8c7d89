#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cove/context/evidence.hpp"
#include "cove/core/config.hpp"
#include "cove/core/types.hpp"
#include "cove/gateway/providers.hpp"
#include "cove/knowledge/knowledge_gap.hpp"
#include "cove/prompts/prompts.hpp"
#include "cove/veracity/veracity.hpp"
#include "cove/wiki/wiki_entities.hpp"

namespace cove::pipeline {

/// Shared read-only inputs of a run.
struct Resources {
    const prompts::PromptLibrary* prompts = nullptr;
    const wiki::EntityIndex* entity_index = nullptr;  // optional
};

struct InstanceResult {
    std::string id;
    bool failed = false;
    std::string error;

    context::EvidenceBundle evidence;
    ContextSummary context;
    std::vector<gap::GapSession> gap_sessions;
    /// Set when a rule decided the instance and context prediction was skipped.
    bool context_skipped = false;

    std::optional<VeracityVerdict> rule_verdict;
    std::optional<veracity::RawVerdict> raw_verdict;  // first model pass
    std::optional<VeracityVerdict> verdict;           // final

    gateway::CallCounts calls;
    std::vector<std::string> warnings;
    double elapsed_ms = 0;
};

struct RunResult {
    std::vector<InstanceResult> instances;  // input order
    std::optional<VeracityLabel> majority;
    gateway::CallCounts totals;
    size_t hard_failures() const;
};

/// Steps 1-3 for one instance, run concurrently. Components switched off
/// contribute nothing and make no provider calls.
context::EvidenceBundle collect_evidence(gateway::Providers& providers, const Instance& instance,
                                         const PipelineConfig& config, const Resources& resources);

/// Evidence rendered as plain text; replaces the context block when context
/// prediction is off.
std::string render_evidence_text(const context::EvidenceBundle& evidence);

/// Everything up to the first veracity pass. Unknown model verdicts are
/// resolved later against the batch majority.
InstanceResult process_instance(gateway::Providers& providers, const Instance& instance, const PipelineConfig& config,
                                const Resources& resources);

/// Runs the batch on a bounded worker pool, then resolves Unknown verdicts.
/// Results do not depend on the worker count.
RunResult run_batch(gateway::Providers& providers, const std::vector<Instance>& instances,
                    const PipelineConfig& config, const Resources& resources);

/// Provider kinds that must stay uncalled under the given toggles.
std::set<gateway::ProviderKind> disabled_providers(const Toggles& toggles);

/// Provider kinds used by one component.
std::set<gateway::ProviderKind> component_providers(std::string_view component);

Json evidence_json(const InstanceResult& r);
Json context_json(const InstanceResult& r);
Json verdict_json(const InstanceResult& r);

struct RunInfo {
    std::string run_id;
    std::string mode;
    std::string input;
    double elapsed_ms = 0;
    std::string started_at;
};

/// Writes evidence/, context/, verdicts/, config.json and manifest.json.
/// Per-instance files hold no timing, so replays are byte-identical.
void write_run_directory(const std::filesystem::path& out, const RunResult& result, const PipelineConfig& config,
                         const RunInfo& info);

/// Canonical text form used for every artifact.
std::string dump_json(const Json& j);

}  // namespace cove::pipeline
