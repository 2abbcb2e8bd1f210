#include <algorithm>
#include <unordered_set>

#include "gauntlet/ideation/ideation.hpp"
#include "gauntlet/ideation/parsers.hpp"
#include "gauntlet/ideation/prompts.hpp"
#include "gauntlet/util/parallel.hpp"
#include "gauntlet/util/text.hpp"

namespace gauntlet::ideation {

using backend::ask_structured;

void ExtractionInput::validate() const {
    if (paper_id.empty()) throw Error(ErrorCode::InvalidArgument, "extraction input has no paper_id");
    if (problem_window == 0 || problem_window > text.size()) {
        throw Error(ErrorCode::InvalidArgument, paper_id + ": problem_window " + std::to_string(problem_window) +
                                                    " outside (0, " + std::to_string(text.size()) + "]");
    }
}

std::string_view ExtractionInput::window() const { return text::utf8_prefix(text, problem_window); }

std::string_view ExtractionInput::remainder() const {
    const auto w = window();
    return std::string_view(text).substr(w.size());
}

ExtractionInput make_extraction_input(const store::CorpusEntry& entry) {
    ExtractionInput in;
    in.paper_id = entry.paper_id;
    in.text = store::read_paper_text(entry);
    in.problem_window = entry.meta.problem_window;
    in.ground_truth_available = entry.meta.ground_truth_available;
    in.validate();
    return in;
}

ProblemStatement extract_problem(const ExtractionInput& input, AgentClient& client, const std::string& problem_id) {
    input.validate();
    auto request = prompts::extraction(input.window(), "ideation/" + problem_id + "/extract");
    const auto fields = ask_structured(client, request, parse::problem_fields, ErrorCode::ExtractionFailed);
    ProblemStatement p;
    p.id = problem_id;
    p.source = ProblemSource::PaperExtraction;
    p.context = fields.context;
    p.symptom = fields.symptom;
    p.constraint = fields.constraint;
    p.validate();
    return p;
}

std::pair<ProblemStatement, GeneralityReport> qc_generality(const ProblemStatement& problem, AgentClient& client,
                                                            int threshold) {
    const std::string base = "ideation/" + problem.id;
    const auto first = ask_structured(client, prompts::generality(problem, base + "/qc"), parse::generality,
                                      ErrorCode::QcFailed);
    GeneralityReport report;
    report.initial_score = first.score;
    report.score = first.score;
    report.critique = first.critique;
    ProblemStatement out = problem;
    if (first.score < threshold) {
        const auto fields = ask_structured(client, prompts::repair(problem, first.critique, base + "/repair"),
                                           parse::problem_fields, ErrorCode::QcFailed);
        out.context = fields.context;
        out.symptom = fields.symptom;
        out.constraint = fields.constraint;
        const auto second = ask_structured(client, prompts::generality(out, base + "/qc-rescore"), parse::generality,
                                           ErrorCode::QcFailed);
        report.repaired = true;
        report.score = second.score;
        report.critique = second.critique;
    }
    report.below_threshold = report.score < threshold;
    out.generality_score = report.score;
    out.validate();
    return {std::move(out), std::move(report)};
}

std::vector<std::string> lexical_overlaps(std::string_view probe, std::string_view reference, std::size_t ngram) {
    if (ngram == 0) throw Error(ErrorCode::InvalidArgument, "n-gram length must be >= 1");
    const auto ref = text::word_tokens(reference);
    const auto words = text::word_tokens(probe);
    std::vector<std::string> spans;
    if (ref.size() < ngram || words.size() < ngram) return spans;

    auto gram_text = [ngram](const std::vector<std::string>& toks, std::size_t at) {
        std::string s;
        for (std::size_t k = 0; k < ngram; ++k) s += (k ? " " : "") + toks[at + k];
        return s;
    };
    std::unordered_set<std::string> ref_grams;
    for (std::size_t i = 0; i + ngram <= ref.size(); ++i) ref_grams.insert(gram_text(ref, i));
    // Merge runs of consecutive matching n-grams into one evidence span.
    std::size_t i = 0;
    while (i + ngram <= words.size()) {
        if (!ref_grams.count(gram_text(words, i))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 + ngram <= words.size() && ref_grams.count(gram_text(words, j + 1))) ++j;
        std::string span;
        for (std::size_t k = i; k < j + ngram; ++k) span += (k > i ? " " : "") + words[k];
        spans.push_back(std::move(span));
        i = j + ngram;
    }
    return spans;
}

LeakReport check_leakage(const ProblemStatement& problem, const ExtractionInput& input, AgentClient& client,
                         const LeakageOptions& options) {
    LeakReport report;
    const std::string probe = problem.context + "\n" + problem.symptom + "\n" + problem.constraint;
    report.evidence = lexical_overlaps(probe, input.remainder(), options.ngram);
    report.lexical = !report.evidence.empty();
    if (options.use_judge) {
        try {
            const auto reply =
                ask_structured(client, prompts::leak_judge(problem, input.text, "ideation/" + problem.id + "/leak-judge"),
                               parse::leak_judge, ErrorCode::ExtractionFailed);
            report.judge = reply.reveals;
            if (reply.reveals && !reply.evidence.empty()) report.evidence.push_back("judge: " + reply.evidence);
        } catch (const Error& e) {
            report.warnings.push_back(std::string("leak judge unavailable, lexical check only: ") + e.what());
        }
    }
    report.leaked = report.lexical || report.judge.value_or(false);
    return report;
}

std::vector<GenerationSlot> generate_mechanisms(const ProblemStatement& problem, std::size_t n,
                                                std::span<const double> temps, AgentClient& client,
                                                const ArchitectOptions& options) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    if (temps.size() != n) {
        throw Error(ErrorCode::InvalidArgument,
                    "need one temperature per proposal: n=" + std::to_string(n) + ", temps=" + std::to_string(temps.size()));
    }
    problem.validate();
    std::string feedback;
    for (const auto& note : options.feedback_notes) feedback += "- " + note + "\n";
    return parallel_map(n, n, [&](std::size_t i) {
        GenerationSlot slot;
        slot.slot = i + 1;
        slot.temperature = temps[i];
        const std::string sid = problem.id + "-p" + std::to_string(slot.slot);
        const std::string_view focus =
            options.domain_prompts.empty() ? std::string_view{} : options.domain_prompts[i % options.domain_prompts.size()];
        try {
            const auto reply = ask_structured(
                client, prompts::architect(problem, temps[i], focus, feedback, "ideation/" + sid + "/architect"),
                parse::architect, ErrorCode::GenerationFailed);
            MechanismProposal m;
            m.id = sid;
            m.problem_id = problem.id;
            m.title = reply.title;
            m.mechanism = reply.mechanism;
            m.rationale = reply.rationale;
            m.evaluation_plan = reply.evaluation_plan;
            m.temperature = Temperature{temps[i]};
            m.validate_against(problem);
            slot.proposal = std::move(m);
        } catch (const Error& e) {
            slot.error = e.what();
        }
        return slot;
    });
}

ValidationJudgment validate_proposal(const MechanismProposal& proposal,
                                     std::optional<std::string_view> ground_truth_text, AgentClient& client) {
    proposal.validate();
    const bool gt = ground_truth_text.has_value();
    const auto reply = ask_structured(
        client, prompts::validator(proposal, ground_truth_text, "ideation/" + proposal.id + "/validate"),
        [gt](std::string_view r) { return parse::judgment(r, gt); }, ErrorCode::ValidationFailed);
    ValidationJudgment j;
    j.proposal_id = proposal.id;
    j.similarity = reply.similarity.value_or(SimilarityClass::DifferentApproach);
    j.quality = reply.quality;
    j.justification = reply.justification;
    j.ground_truth = gt;
    return j;
}

std::vector<FrontierExpansion> expand_frontier(const ProblemStatement& problem, const MechanismProposal& winner,
                                               const ValidationJudgment& judgment, AgentClient& client) {
    if (!is_viable(judgment.verdict())) {
        throw Error(ErrorCode::Precondition, "cannot expand " + problem.id + ": winning judgment is FAIL");
    }
    static constexpr char kSuffix[] = {'v', 'l', 'f'};
    return parallel_map(kAllExpansionModes.size(), kAllExpansionModes.size(), [&](std::size_t i) {
        const ExpansionMode mode = kAllExpansionModes[i];
        FrontierExpansion e;
        e.parent_problem_id = problem.id;
        e.mode = mode;
        const std::string child = problem.id + "-" + kSuffix[i];
        try {
            const auto fields = ask_structured(
                client, prompts::expander(mode, problem, winner, "ideation/" + child + "/expand"),
                parse::problem_fields, ErrorCode::GenerationFailed);
            ProblemStatement p;
            p.id = child;
            p.source = ProblemSource::Expansion;
            p.context = fields.context;
            p.symptom = fields.symptom;
            p.constraint = fields.constraint;
            p.lineage = Lineage{problem.id, mode};
            p.validate();
            e.new_problem = std::move(p);
        } catch (const Error& err) {
            e.error = err.what();
        }
        return e;
    });
}

}  // namespace gauntlet::ideation
