#include <iostream>

#include <CLI11.hpp>

#include "gauntlet/cli/cli.hpp"

namespace cli = gauntlet::cli;

int main(int argc, char** argv) {
    CLI::App app{"gauntlet: multi-agent pipelines for architecture research"};
    app.require_subcommand(1);

    std::string config_path;
    std::string backend, out, corpus, mock_script, transcript, feedback;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    auto* backend_opt = app.add_option("--backend", backend, "http, mock or replay")
                            ->check(CLI::IsMember({"http", "http-openai-compatible", "mock", "replay"}));
    auto* seed_opt = app.add_option("--seed", seed, "mock backend seed");
    auto* out_opt = app.add_option("--out", out, "output root (runs are written under OUT/runs)");
    auto* corpus_opt = app.add_option("--corpus", corpus, "corpus directory");
    auto* mock_opt = app.add_option("--mock-script", mock_script, "mock rules layered over the built-in script");
    auto* transcript_opt = app.add_option("--transcript", transcript, "transcript served by the replay backend");
    auto* feedback_opt = app.add_option("--feedback", feedback, "funnel feedback directory fed to the architect");

    std::string paper, candidates, run_id, format = "markdown";
    auto* ideate = app.add_subcommand("ideate", "extract problems, generate and validate mechanisms");
    ideate->add_option("--paper", paper, "restrict to one paper id");
    auto* review = app.add_subcommand("review", "six-reviewer panel and synthesis for one paper");
    review->add_option("--paper", paper, "paper id")->required();
    auto* forge = app.add_subcommand("forge", "build, verify and interpret a performance model for one paper");
    forge->add_option("--paper", paper, "paper id")->required();
    auto* funnel = app.add_subcommand("funnel", "run candidates through the evaluation tiers");
    funnel->add_option("--candidates", candidates, "JSONL candidates file")->required();
    auto* corpus_cmd = app.add_subcommand("corpus", "inspect the corpus");
    corpus_cmd->require_subcommand(1);
    auto* corpus_list = corpus_cmd->add_subcommand("list", "list usable papers");
    auto* corpus_validate = corpus_cmd->add_subcommand("validate", "report malformed entries");
    auto* report = app.add_subcommand("report", "re-emit the report of a stored run");
    report->add_option("--run", run_id, "run id")->required();
    report->add_option("--format", format, "json or markdown")->check(CLI::IsMember({"json", "markdown", "md"}));
    auto* runs = app.add_subcommand("runs", "list stored runs");

    CLI11_PARSE(app, argc, argv);

    cli::Io io{std::cout, std::cerr, {}, {}};
    try {
        cli::CliConfig config;
        if (!config_path.empty()) config = cli::load_config(config_path);
        cli::Overrides o;
        if (*backend_opt) o.backend = backend;
        if (*seed_opt) o.seed = seed;
        if (*out_opt) o.out = out;
        if (*corpus_opt) o.corpus = corpus;
        if (*mock_opt) o.mock_script = mock_script;
        if (*transcript_opt) o.transcript = transcript;
        if (*feedback_opt) o.feedback = feedback;
        cli::apply_overrides(config, o);

        if (*ideate) {
            return cli::cmd_ideate(config, paper.empty() ? std::nullopt : std::optional<std::string>(paper), io)
                .exit_code;
        }
        if (*review) return cli::cmd_review(config, paper, io).exit_code;
        if (*forge) return cli::cmd_forge(config, paper, io).exit_code;
        if (*funnel) return cli::cmd_funnel(config, candidates, io).exit_code;
        if (*corpus_list) return cli::cmd_corpus_list(config, io);
        if (*corpus_validate) return cli::cmd_corpus_validate(config, io);
        if (*report) return cli::cmd_report(config, run_id, gauntlet::store::report_format_from(format), io);
        if (*runs) return cli::cmd_runs(config, io);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitError;
    }
    return cli::kExitError;
}
