#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gauntlet/backend/client.hpp"
#include "gauntlet/kernel/types.hpp"
#include "gauntlet/store/corpus.hpp"

namespace gauntlet::ideation {

using json = nlohmann::json;
using backend::AgentClient;

struct ExtractionInput {
    std::string paper_id;
    std::string text;
    /// Leading bytes of `text` the extractor may see.
    std::size_t problem_window = store::kDefaultProblemWindow;
    bool ground_truth_available = true;

    void validate() const;
    /// The visible problem-setup prefix, cut on a UTF-8 boundary.
    std::string_view window() const;
    /// Everything after the window; treated as solution-bearing.
    std::string_view remainder() const;
};

ExtractionInput make_extraction_input(const store::CorpusEntry& entry);

struct GeneralityReport {
    int score = 1;
    int initial_score = 1;
    std::string critique;
    bool repaired = false;
    bool below_threshold = false;
};

struct LeakageOptions {
    std::size_t ngram = 8;
    bool use_judge = true;
};

struct LeakReport {
    bool leaked = false;
    bool lexical = false;
    std::optional<bool> judge;  // unset when the judge was skipped or failed
    std::vector<std::string> evidence;
    std::vector<std::string> warnings;
};

struct ValidationJudgment {
    std::string proposal_id;
    SimilarityClass similarity = SimilarityClass::DifferentApproach;
    QualityClass quality = QualityClass::Flawed;
    std::string justification;
    /// False when no ground-truth paper exists; similarity is then fixed.
    bool ground_truth = true;

    Verdict verdict() const noexcept { return classify_verdict(similarity, quality); }
};

struct GenerationSlot {
    std::size_t slot = 0;  // 1-based
    double temperature = 0.0;
    std::optional<MechanismProposal> proposal;
    std::string error;
};

struct FrontierExpansion {
    std::string parent_problem_id;
    ExpansionMode mode = ExpansionMode::Vertical;
    std::optional<ProblemStatement> new_problem;
    std::string error;

    bool ok() const noexcept { return new_problem.has_value(); }
};

// Individual stages. Each issues its agent calls through `client`.

/// Only input.window() is ever placed in a prompt.
ProblemStatement extract_problem(const ExtractionInput& input, AgentClient& client, const std::string& problem_id);

std::pair<ProblemStatement, GeneralityReport> qc_generality(const ProblemStatement& problem, AgentClient& client,
                                                            int threshold = 7);

/// Lexical n-gram overlap against input.remainder(), plus an optional judge call.
LeakReport check_leakage(const ProblemStatement& problem, const ExtractionInput& input, AgentClient& client,
                         const LeakageOptions& options = {});

/// Verbatim word n-gram overlaps between `probe` and `reference`, merged into spans.
std::vector<std::string> lexical_overlaps(std::string_view probe, std::string_view reference, std::size_t ngram);

struct ArchitectOptions {
    /// Optional per-slot focus paragraphs (slot i uses entry (i-1) mod size).
    std::vector<std::string> domain_prompts;
    /// Earlier evaluation feedback appended to every architect prompt.
    std::vector<std::string> feedback_notes;
};

/// One independent architect call per temperature. A slot whose reply cannot
/// be parsed, even after a re-prompt, carries its error instead of a proposal.
std::vector<GenerationSlot> generate_mechanisms(const ProblemStatement& problem, std::size_t n,
                                                std::span<const double> temps, AgentClient& client,
                                                const ArchitectOptions& options = {});

/// With ground truth the validator sees the whole paper. Without it only
/// quality is judged and similarity is DIFFERENT_APPROACH.
ValidationJudgment validate_proposal(const MechanismProposal& proposal,
                                     std::optional<std::string_view> ground_truth_text, AgentClient& client);

/// One expansion per mode. Throws Error(Precondition) if `judgment` is a FAIL.
std::vector<FrontierExpansion> expand_frontier(const ProblemStatement& problem, const MechanismProposal& winner,
                                               const ValidationJudgment& judgment, AgentClient& client);

// Whole pipeline.

struct IdeationConfig {
    std::size_t runs_per_paper = 5;
    std::size_t n_proposals = 5;
    double temp_lo = 0.5;
    double temp_hi = 0.9;
    int generality_threshold = 7;
    LeakageOptions leakage;
    bool expand = true;
    /// 1: expansions are produced but not processed further.
    std::size_t recursion_depth = 1;
    ArchitectOptions architect;
    /// Review hook for the top proposal of each solved cell.
    std::function<json(const ProblemStatement&, const MechanismProposal&)> synthesis;
};

struct SlotResult {
    GenerationSlot generation;
    std::optional<ValidationJudgment> judgment;
    std::string validation_error;

    /// Failed generation or validation counts as FAIL.
    Verdict verdict() const noexcept { return judgment ? judgment->verdict() : Verdict::Fail; }
};

/// Generation, validation and (when viable) expansion of one problem.
struct ProblemResult {
    ProblemStatement problem;
    std::size_t depth = 0;
    std::vector<SlotResult> slots;
    std::vector<FrontierExpansion> expansions;
    std::optional<json> synthesis;
    std::string synthesis_error;

    /// Best slot verdict; FAIL when there are no slots.
    Verdict verdict() const noexcept;
    /// Lowest slot holding the best viable verdict.
    std::optional<std::size_t> winner() const noexcept;
};

enum class CellStatus { Complete, ExtractionFailed, QcFailed, Leaked };
std::string_view to_string(CellStatus s) noexcept;

struct CellResult {
    std::string paper_id;
    std::size_t run = 0;  // 1-based
    std::string problem_id;
    CellStatus status = CellStatus::Complete;
    std::string error;
    std::optional<GeneralityReport> generality;
    std::optional<LeakReport> leakage;
    std::optional<ProblemResult> result;
    /// Expansion problems processed further (depth >= 1), in queue order.
    std::vector<ProblemResult> frontier;

    bool counted() const noexcept { return status == CellStatus::Complete; }
};

struct IdeationReport {
    std::vector<CellResult> cells;  // sorted by paper_id, run
    RunStats stats;                 // one verdict per counted cell
    RunStats proposal_stats;        // one verdict per generated slot of counted cells
    RunStats frontier_stats;        // frontier problems, quality-only
    std::vector<std::string> warnings;

    std::size_t excluded() const noexcept;
    bool partial() const noexcept { return excluded() > 0; }
};

IdeationReport run_ideation(std::span<const ExtractionInput> corpus, AgentClient& client, const IdeationConfig& config);

json to_json(const GeneralityReport& r);
json to_json(const LeakReport& r);
json to_json(const ValidationJudgment& j);
json to_json(const FrontierExpansion& e);
json to_json(const ProblemResult& r);
json to_json(const CellResult& c);
json to_json(const IdeationReport& r);

/// One {proposal, problem} object per generated proposal, in report order.
std::vector<json> export_candidates(const IdeationReport& report);

}  // namespace gauntlet::ideation
