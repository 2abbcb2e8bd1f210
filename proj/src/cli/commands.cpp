#include <fstream>
#include <iostream>
#include <sstream>

#include "gauntlet/backend/factory.hpp"
#include "gauntlet/backend/transcript.hpp"
#include "gauntlet/cli/cli.hpp"
#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/panel/panel.hpp"
#include "gauntlet/store/corpus.hpp"
#include "gauntlet/store/run.hpp"

namespace gauntlet::cli {

namespace {

constexpr std::string_view kTranscriptFile = "transcript.jsonl";

std::shared_ptr<backend::Backend> default_backend(const CliConfig& c) {
    backend::BackendSources sources;
    sources.mock_script = default_mock_script();
    if (c.mock_script) sources.mock_script = sources.mock_script.overlaid_by(backend::MockScript::load(*c.mock_script));
    sources.replay_transcript = c.replay_transcript;
    return backend::make_backend(c.backend, sources);
}

/// Everything a pipeline run needs once pre-flight has passed.
struct Session {
    std::string run_id;
    fs::path run_dir;
    std::shared_ptr<backend::Transcript> transcript;
    std::unique_ptr<backend::AgentClient> client;

    Session(const CliConfig& c, Io& io) {
        auto be = io.backend_factory ? io.backend_factory(c) : default_backend(c);
        run_id = store::make_run_id();
        run_dir = store::run_directory(c.out, run_id);
        if (fs::exists(run_dir / store::kRecordFile)) throw Error(ErrorCode::DuplicateRun, "run " + run_id + " exists");
        backend::Transcript::Options opts;
        opts.sink = run_dir / kTranscriptFile;
        opts.keep_entries = false;
        transcript = std::make_shared<backend::Transcript>(opts);
        client = std::make_unique<backend::AgentClient>(std::move(be), transcript, c.backend.max_parallel);
    }

    /// Closes the transcript, writes the report pair and persists the run.
    void finish(const CliConfig& c, store::PipelineKind pipeline, store::RunStatus status, const json& body,
                store::ArtifactSet artifacts, Io& io) {
        client.reset();
        transcript.reset();
        store::RunRecord record;
        record.run_id = run_id;
        record.pipeline = pipeline;
        record.config = c.snapshot();
        record.transcript = std::string(kTranscriptFile);
        record.status = status;
        artifacts["report.json"] = store::emit_report(record, body, store::ReportFormat::Json);
        artifacts["report.md"] = store::emit_report(record, body, store::ReportFormat::Markdown);
        store::persist_run(c.out, record, artifacts);
        io.out << "run_id: " << run_id << "\n";
        io.out << "run_dir: " << run_dir.string() << "\n";
    }
};

int exit_for(store::RunStatus s) {
    switch (s) {
        case store::RunStatus::Complete: return kExitComplete;
        case store::RunStatus::Partial: return kExitPartial;
        case store::RunStatus::Failed: return kExitError;
    }
    return kExitError;
}

template <class Fn>
CommandResult guarded(Io& io, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        io.err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << "\n";
    }
    return CommandResult{};
}

void check(const CliConfig& c) { c.validate(); }

store::CorpusScan scan_corpus(const CliConfig& c, Io& io) {
    if (!c.corpus) throw Error(ErrorCode::Configuration, "no corpus configured (set \"corpus\" or --corpus)");
    auto scan = store::ingest_corpus(*c.corpus);
    for (const auto& d : scan.diagnostics) io.err << "corpus: " << d << "\n";
    for (const auto& w : scan.warnings) io.err << "warning: " << w << "\n";
    return scan;
}

const store::CorpusEntry& find_paper(const store::CorpusScan& scan, const std::string& id) {
    for (const auto& e : scan.entries) {
        if (e.paper_id == id) return e;
    }
    throw Error(ErrorCode::CorpusError, "paper '" + id + "' is not a usable corpus entry");
}

panel::PersonaLibrary load_personas(const CliConfig& c) {
    auto lib = panel::load_library(c.personas ? *c.personas : panel::default_library_path());
    lib.validate();
    return lib;
}

std::unique_ptr<modelforge::Sandbox> make_sandbox(const CliConfig& c, Io& io) {
    std::unique_ptr<modelforge::Sandbox> s;
    if (io.sandbox_factory) s = io.sandbox_factory(c);
    else s = std::make_unique<modelforge::ProcessSandbox>(c.sandbox.to_process_config());
    s->preflight();
    return s;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

CommandResult cmd_ideate(const CliConfig& config, const std::optional<std::string>& paper, Io& io) {
    return guarded(io, [&]() -> CommandResult {
        check(config);
        const auto scan = scan_corpus(config, io);
        std::vector<store::CorpusEntry> selected;
        if (paper) selected.push_back(find_paper(scan, *paper));
        else selected = scan.entries;
        if (selected.empty()) throw Error(ErrorCode::CorpusError, "corpus has no usable papers");
        std::vector<ideation::ExtractionInput> inputs;
        for (const auto& e : selected) inputs.push_back(ideation::make_extraction_input(e));

        ideation::IdeationConfig icfg = config.ideation;
        if (config.feedback_dir) {
            for (auto& n : funnel::load_feedback_notes(*config.feedback_dir)) icfg.architect.feedback_notes.push_back(n);
        }
        std::optional<panel::PersonaLibrary> library;
        if (config.ideation_synthesis) library = load_personas(config);

        Session s(config, io);
        if (library) {
            icfg.synthesis = [&](const ProblemStatement& problem, const MechanismProposal& proposal) {
                const auto doc = "[PROBLEM]\n" + problem.render() + "\n\n[PROPOSAL]\n" + proposal.render();
                return panel::to_json(panel::run_panel("synthesis-" + proposal.id, doc, *library, *s.client));
            };
        }
        const auto report = ideation::run_ideation(inputs, *s.client, icfg);

        std::string candidates;
        for (const auto& c : ideation::export_candidates(report)) candidates += c.dump() + "\n";
        const auto status = report.partial() ? store::RunStatus::Partial : store::RunStatus::Complete;
        for (const auto& w : report.warnings) io.err << "warning: " << w << "\n";
        s.finish(config, store::PipelineKind::Ideation, status, ideation::to_json(report),
                 {{"ideation/candidates.jsonl", candidates}}, io);
        io.out << "n=" << report.stats.n_total() << " viable=" << report.stats.n_viable() << "\n";
        return {exit_for(status), s.run_id, s.run_dir};
    });
}

CommandResult cmd_review(const CliConfig& config, const std::string& paper, Io& io) {
    return guarded(io, [&]() -> CommandResult {
        check(config);
        const auto scan = scan_corpus(config, io);
        const auto& entry = find_paper(scan, paper);
        const auto text = store::read_paper_text(entry);
        const auto library = load_personas(config);

        Session s(config, io);
        const auto result = panel::run_panel(entry.paper_id, text, library, *s.client);
        store::ArtifactSet artifacts;
        if (result.masterclass) artifacts["panel/masterclass.md"] = panel::masterclass_markdown(*result.masterclass);
        for (const auto& f : result.failures) io.err << "review failure: " << f.persona_id << ": " << f.error << "\n";
        if (!result.synthesis_error.empty()) io.err << "synthesis failure: " << result.synthesis_error << "\n";
        const auto status = result.complete() ? store::RunStatus::Complete : store::RunStatus::Partial;
        s.finish(config, store::PipelineKind::Panel, status, panel::to_json(result), std::move(artifacts), io);
        io.out << "critiques=" << result.critiques.size() << " synthesis=" << (result.complete() ? "yes" : "no")
               << "\n";
        return {exit_for(status), s.run_id, s.run_dir};
    });
}

CommandResult cmd_forge(const CliConfig& config, const std::string& paper, Io& io) {
    return guarded(io, [&]() -> CommandResult {
        check(config);
        const auto scan = scan_corpus(config, io);
        const auto& entry = find_paper(scan, paper);
        const auto text = store::read_paper_text(entry);
        auto sandbox = make_sandbox(config, io);

        Session s(config, io);
        try {
            const auto result =
                modelforge::run_forge(entry.paper_id, text, *s.client, *sandbox, s.run_dir / "work", config.forge);
            for (const auto& w : result.warnings) io.err << "warning: " << w << "\n";
            const auto status =
                result.pick.chosen_run_index ? store::RunStatus::Complete : store::RunStatus::Partial;
            s.finish(config, store::PipelineKind::Forge, status, modelforge::to_json(result),
                     modelforge::forge_artifacts(result), io);
            if (result.pick.chosen_run_index) io.out << "pick=run-" << *result.pick.chosen_run_index << "\n";
            else io.out << "pick=none\n";
            return {exit_for(status), s.run_id, s.run_dir};
        } catch (const modelforge::ForgeFailedError& e) {
            io.err << "error: " << e.what() << "\n";
            s.finish(config, store::PipelineKind::Forge, store::RunStatus::Failed, modelforge::to_json(e.result()),
                     modelforge::forge_artifacts(e.result()), io);
            return {kExitError, s.run_id, s.run_dir};
        }
    });
}

CommandResult cmd_funnel(const CliConfig& config, const fs::path& candidates_path, Io& io) {
    return guarded(io, [&]() -> CommandResult {
        check(config);
        const auto candidates = funnel::load_candidates(candidates_path);
        std::map<std::string, std::string> programs;
        for (const auto& [domain, path] : config.analytical_models) programs[domain] = read_file(path);
        std::unique_ptr<modelforge::Sandbox> sandbox;
        if (config.funnel.enabled[3] || !programs.empty()) sandbox = make_sandbox(config, io);

        Session s(config, io);
        funnel::FunnelConfig fcfg = config.funnel;
        if (!programs.empty()) {
            fcfg.tier2_hook = funnel::domain_model_hook(std::move(programs), *sandbox, s.run_dir / "work" / "tier2");
        }
        const auto ledger = funnel::run_funnel(candidates, fcfg, *s.client, sandbox.get(), s.run_dir / "work");
        const auto violations = ledger.invariant_violations();
        for (const auto& v : violations) io.err << "ledger invariant violated: " << v << "\n";
        for (const auto& w : ledger.warnings) io.err << "warning: " << w << "\n";

        const json full = funnel::to_json(ledger);
        std::size_t failed = 0;
        for (const auto& d : ledger.decisions) failed += d.passed ? 0 : 1;
        const json body{{"candidates", candidates.size()},
                        {"tiers", full.at("tiers")},
                        {"failed_decisions", failed},
                        {"warnings", ledger.warnings}};
        const auto status = violations.empty() ? store::RunStatus::Complete : store::RunStatus::Failed;
        s.finish(config, store::PipelineKind::Funnel, status, body, funnel::funnel_artifacts(ledger), io);
        for (const auto& t : ledger.tiers) {
            io.out << "tier " << t.tier << " " << funnel::TierId(t.tier).name() << ": entered=" << t.entered
                   << " passed=" << t.passed << "\n";
        }
        return {exit_for(status), s.run_id, s.run_dir};
    });
}

int cmd_corpus_list(const CliConfig& config, Io& io) {
    return guarded(io, [&]() -> CommandResult {
               check(config);
               const auto scan = scan_corpus(config, io);
               for (const auto& e : scan.entries) {
                   io.out << e.paper_id << "\twindow=" << e.meta.problem_window
                          << "\tground_truth=" << (e.meta.ground_truth_available ? "yes" : "no") << "\t"
                          << e.directory.string() << "\n";
               }
               return {kExitComplete, {}, {}};
           })
        .exit_code;
}

int cmd_corpus_validate(const CliConfig& config, Io& io) {
    return guarded(io, [&]() -> CommandResult {
               check(config);
               const auto scan = scan_corpus(config, io);
               io.out << scan.entries.size() << " usable, " << scan.diagnostics.size() << " malformed\n";
               return {scan.diagnostics.empty() ? kExitComplete : kExitError, {}, {}};
           })
        .exit_code;
}

int cmd_report(const CliConfig& config, const std::string& run_id, store::ReportFormat format, Io& io) {
    return guarded(io, [&]() -> CommandResult {
               auto loaded = store::load_run(config.out, run_id);
               const auto dir = store::run_directory(config.out, run_id);
               const json stored = json::parse(read_file(dir / "report.json"), nullptr, false);
               if (stored.is_discarded() || !stored.contains("report")) {
                   throw Error(ErrorCode::Io, "run " + run_id + " has a malformed report.json");
               }
               if (!loaded.completed) loaded.record.status = store::RunStatus::Partial;
               io.out << store::emit_report(loaded.record, stored.at("report"), format);
               return {loaded.completed ? exit_for(loaded.record.status) : kExitPartial, run_id, dir};
           })
        .exit_code;
}

int cmd_runs(const CliConfig& config, Io& io) {
    return guarded(io, [&]() -> CommandResult {
               for (const auto& r : store::list_runs(config.out)) {
                   io.out << r.run_id << "\t" << (r.pipeline ? std::string(store::to_string(*r.pipeline)) : "?")
                          << "\t" << store::to_string(r.status) << (r.completed ? "" : " (no marker)") << "\n";
               }
               return {kExitComplete, {}, {}};
           })
        .exit_code;
}

}  // namespace gauntlet::cli
