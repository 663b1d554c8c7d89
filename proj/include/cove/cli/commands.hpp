#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cove/core/config.hpp"
#include "cove/gateway/gateway.hpp"

namespace cove::cli {

namespace fs = std::filesystem;

/// Refuses every request. Used in replay so a missing fixture can never reach the network.
class OfflineTransport final : public gateway::Transport {
public:
    std::string send(gateway::ProviderKind kind, const std::string& payload) override;
};

struct ProviderSetup {
    std::string mode = "replay";
    fs::path cache;
    size_t max_parallel = 8;
    /// Transport for live and record modes; HttpTransport when null.
    std::shared_ptr<gateway::Transport> transport;
};

/// Gateway with the configured local handlers (gazetteer NER) installed.
std::unique_ptr<gateway::Gateway> make_gateway(const ProviderSetup& setup, const PipelineConfig& config);

struct RunOptions {
    fs::path input;
    fs::path config;  // empty: defaults
    fs::path out;
    std::string toggles;  // "name=off,..." or an 8-digit ablation row
    std::optional<Toggles> toggle_set;  // replaces the configured toggles; applied before `toggles`
    std::optional<int> workers;
    std::string run_id;
    ProviderSetup providers;
};

struct EvalOptions {
    fs::path predictions;  // run directory
    fs::path gold;         // instances with gold_context / gold_label
    fs::path gazetteer;    // optional
    fs::path out;          // report directory; defaults to predictions
};

struct AblationRow {
    std::string name;
    Toggles toggles;
};

struct AblateOptions {
    RunOptions run;
    fs::path plan;  // JSON list; empty uses the nine standard rows
    fs::path gold;  // defaults to run.input
    fs::path gazetteer;
};

struct PrepareOptions {
    fs::path input;
    fs::path config;
    fs::path out;  // JSONL file
    std::string task;  // decompose | generate_captions
    ProviderSetup providers;
};

/// Flags in the order web captions, visual entities, wikipedia entities,
/// automated captions, knowledge gap, context prediction, veracity prediction,
/// veracity rules. A 0 for veracity prediction leaves the model an empty context.
Toggles toggles_from_row(std::string_view bits);
std::vector<AblationRow> standard_ablation_rows();
std::vector<AblationRow> load_ablation_plan(const fs::path& file);

/// Each returns the process exit code: 0 iff no hard failures.
int cmd_run(const RunOptions& options, std::ostream& log);
int cmd_eval(const EvalOptions& options, std::ostream& log);
int cmd_ablate(const AblateOptions& options, std::ostream& log);
int cmd_prepare(const PrepareOptions& options, std::ostream& log);

}  // namespace cove::cli
