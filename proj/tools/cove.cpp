#include <iostream>

#include "CLI11.hpp"
#include "cove/cli/commands.hpp"
#include "cove/core/errors.hpp"

namespace {

void provider_flags(CLI::App* app, cove::cli::ProviderSetup& p) {
    app->add_option("--cache", p.cache, "Response cache directory");
    app->add_option("--mode", p.mode, "Provider mode")->check(CLI::IsMember({"live", "record", "replay"}));
    app->add_option("--max-parallel", p.max_parallel, "Concurrent provider requests");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Image context prediction and caption veracity"};
    app.require_subcommand(1);

    cove::cli::RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run the pipeline over an instance file");
    run_cmd->add_option("--input", run.input, "Instances (JSON lines)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--config", run.config, "Pipeline configuration (JSON)")->check(CLI::ExistingFile);
    run_cmd->add_option("--toggles", run.toggles, "name=on|off list or an 8-digit ablation row");
    run_cmd->add_option("--out", run.out, "Run directory")->required();
    run_cmd->add_option("--workers", run.workers, "Instance workers");
    run_cmd->add_option("--run-id", run.run_id, "Run identifier");
    provider_flags(run_cmd, run.providers);

    cove::cli::EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "Score a run directory against gold annotations");
    eval_cmd->add_option("--predictions", eval.predictions, "Run directory")->required()->check(CLI::ExistingDirectory);
    eval_cmd->add_option("--input,--gold", eval.gold, "Gold instances (JSON lines)")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--gazetteer", eval.gazetteer, "Place gazetteer (TSV)")->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", eval.out, "Report directory (default: the run directory)");

    cove::cli::AblateOptions ablate;
    auto* ablate_cmd = app.add_subcommand("ablate", "Run and score one configuration per ablation row");
    ablate_cmd->add_option("--input", ablate.run.input, "Instances (JSON lines)")->required()->check(CLI::ExistingFile);
    ablate_cmd->add_option("--config", ablate.run.config, "Pipeline configuration (JSON)")->check(CLI::ExistingFile);
    ablate_cmd->add_option("--plan", ablate.plan, "Ablation plan (JSON list)")->check(CLI::ExistingFile);
    ablate_cmd->add_option("--gold", ablate.gold, "Gold instances (default: --input)")->check(CLI::ExistingFile);
    ablate_cmd->add_option("--gazetteer", ablate.gazetteer, "Place gazetteer (TSV)")->check(CLI::ExistingFile);
    ablate_cmd->add_option("--out", ablate.run.out, "Output directory")->required();
    ablate_cmd->add_option("--workers", ablate.run.workers, "Instance workers");
    provider_flags(ablate_cmd, ablate.run.providers);

    cove::cli::PrepareOptions prepare;
    auto* prepare_cmd = app.add_subcommand("prepare", "Decompose captions or generate accurate captions");
    prepare_cmd->add_option("--input", prepare.input, "Instances (JSON lines)")->required()->check(CLI::ExistingFile);
    prepare_cmd->add_option("--task", prepare.task, "decompose or generate_captions")
        ->required()
        ->check(CLI::IsMember({"decompose", "generate_captions"}));
    prepare_cmd->add_option("--config", prepare.config, "Pipeline configuration (JSON)")->check(CLI::ExistingFile);
    prepare_cmd->add_option("--out", prepare.out, "Output file (JSON lines)")->required();
    provider_flags(prepare_cmd, prepare.providers);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cove::cli::cmd_run(run, std::cerr);
        if (*eval_cmd) return cove::cli::cmd_eval(eval, std::cout);
        if (*ablate_cmd) return cove::cli::cmd_ablate(ablate, std::cout);
        if (*prepare_cmd) return cove::cli::cmd_prepare(prepare, std::cerr);
    } catch (const cove::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
