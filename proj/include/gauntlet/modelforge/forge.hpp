#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gauntlet/backend/client.hpp"
#include "gauntlet/modelforge/sandbox.hpp"
#include "gauntlet/store/run.hpp"

namespace gauntlet::modelforge {

using json = nlohmann::json;
using backend::AgentClient;

/// Hard cap on verify-repair iterations in either phase.
inline constexpr int kMaxLoops = 3;

struct Variable {
    std::string symbol;
    std::string meaning;
    std::string units;
};

struct Calibration {
    std::string source;
    json values;
};

struct ModelSpec {
    std::string paper_id;
    std::vector<Variable> variables;
    std::vector<std::string> relationships;
    std::vector<std::string> constraints;
    std::vector<Calibration> calibration_data;

    /// Relationship identifiers that are neither declared symbols nor
    /// common math functions, one issue string each.
    std::vector<std::string> undeclared_references() const;
};

json to_json(const ModelSpec& s);
ModelSpec model_spec_from_json(const json& j, std::string paper_id);

enum class VerifierId { Spec, Functional, Directive };
std::string_view to_string(VerifierId v) noexcept;

struct VerifierReport {
    VerifierId verifier = VerifierId::Spec;
    bool approved = false;  // implies issues.empty()
    std::vector<std::string> issues;
};

json to_json(const VerifierReport& r);

/// "APPROVED: YES|NO" plus "ISSUES:" bullets. Listing any issue rejects;
/// an unparseable reply is a rejection naming the parse problem.
VerifierReport parse_verifier_reply(VerifierId id, std::string_view reply);

struct ModelArtifact {
    std::string spec_id;
    std::string program_text;
    ExecutionReport execution;
    /// Advisory lexical findings (file or network access in the program).
    std::vector<std::string> advisories;
};

std::vector<std::string> scan_program(std::string_view program);

struct Interpretation {
    std::string model_structure;
    std::string assumptions;
    std::string findings;
    std::string magic_gaps;
    std::string full_text;
    /// The magic-gap section declares the paper's claim infeasible.
    bool infeasible = false;
};

json to_json(const Interpretation& i);

struct ForgeConfig {
    std::size_t runs = 3;
    bool concurrent_runs = true;
    /// Carry an unapproved spec or program forward instead of halting.
    bool continue_unapproved = false;
};

struct LoopCounts {
    int phase1 = 0;
    int phase2 = 0;
};

enum class RunState { Complete, HaltedUnapproved, Failed };
std::string_view to_string(RunState s) noexcept;

struct Phase1Result {
    ModelSpec spec;
    bool approved = false;
    int loop_count = 0;
    std::vector<VerifierReport> reports;  // one per iteration
};

struct Phase2Iteration {
    ExecutionReport execution;
    VerifierReport functional;
    VerifierReport directive;
};

struct Phase2Result {
    ModelArtifact artifact;
    bool approved = false;
    int loop_count = 0;
    std::vector<Phase2Iteration> iterations;
};

struct ForgeRun {
    std::size_t run_index = 1;  // 1-based
    RunState state = RunState::Failed;
    std::string error;
    std::optional<Phase1Result> phase1;
    std::optional<Phase2Result> phase2;
    std::optional<Interpretation> interpretation;

    LoopCounts loop_counts() const noexcept;
    bool succeeded() const noexcept { return state == RunState::Complete; }
};

struct RubricScore {
    std::size_t run_index = 1;
    int correctness = 0;  // 0-10
    int insight = 0;      // 0-10
    bool eligible = false;

    int combined() const noexcept { return eligible ? correctness + insight : 0; }
};

struct EnsemblePick {
    std::optional<std::size_t> chosen_run_index;
    std::vector<RubricScore> rubric_scores;
    std::string justification;
};

/// Maximal combined score among eligible runs; ties to the lowest index.
std::optional<std::size_t> choose_run(const std::vector<RubricScore>& scores);

struct ForgeResult {
    std::string paper_id;
    std::vector<ForgeRun> runs;
    EnsemblePick pick;
    std::vector<std::string> warnings;
};

json to_json(const ForgeRun& r);
json to_json(const ForgeResult& r);

class ForgeFailedError : public Error {
public:
    ForgeFailedError(std::string message, ForgeResult result)
        : Error(ErrorCode::ForgeFailed, std::move(message)), result_(std::move(result)) {}
    const ForgeResult& result() const noexcept { return result_; }

private:
    ForgeResult result_;
};

/// Per-run tag prefix, e.g. "forge/paper-a/run-2".
std::string run_tag(std::string_view paper_id, std::size_t run_index);

Phase1Result phase1_specify(std::string_view paper_id, std::string_view paper_text, AgentClient& client,
                            const std::string& tag_prefix);

Phase2Result phase2_implement(const ModelSpec& spec, AgentClient& client, Sandbox& sandbox,
                              const std::filesystem::path& work_dir, const std::string& tag_prefix);

Interpretation phase3_interpret(const ModelArtifact& artifact, const ModelSpec& spec, std::string_view paper_text,
                                AgentClient& client, const std::string& tag_prefix);

ForgeRun run_single(std::string_view paper_id, std::string_view paper_text, std::size_t run_index,
                    AgentClient& client, Sandbox& sandbox, const std::filesystem::path& work_root,
                    const ForgeConfig& config);

/// Independent runs, then the selector. Throws ForgeFailedError (carrying the
/// full result) when every run failed.
ForgeResult run_forge(std::string_view paper_id, std::string_view paper_text, AgentClient& client, Sandbox& sandbox,
                      const std::filesystem::path& work_root, const ForgeConfig& config = {});

/// forge/run-N/{spec.json, model.src, execution.log, verifiers.json,
/// interpretation.md} plus forge/pick.json.
store::ArtifactSet forge_artifacts(const ForgeResult& result);

}  // namespace gauntlet::modelforge
