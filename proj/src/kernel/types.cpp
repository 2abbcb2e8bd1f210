#include "gauntlet/kernel/types.hpp"

#include <cmath>
#include <string>

#include "gauntlet/util/error.hpp"
#include "gauntlet/util/text.hpp"

namespace gauntlet {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& all, std::string_view what) {
    const std::string want = text::to_upper(text::trim(s));
    for (E e : all) {
        if (text::to_upper(to_string(e)) == want) return e;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

void require_text(std::string_view value, std::string_view field, std::string_view owner) {
    if (text::trim(value).empty()) {
        throw Error(ErrorCode::InvalidArgument, std::string(owner) + ": field '" + std::string(field) + "' is empty");
    }
}

}  // namespace

std::string_view to_string(ProblemSource v) noexcept {
    switch (v) {
        case ProblemSource::PaperExtraction: return "paper-extraction";
        case ProblemSource::Expansion: return "expansion";
        case ProblemSource::Manual: return "manual";
        case ProblemSource::TelemetryStub: return "telemetry-stub";
    }
    return "manual";
}

std::string_view to_string(ExpansionMode v) noexcept {
    switch (v) {
        case ExpansionMode::Vertical: return "Vertical";
        case ExpansionMode::Lateral: return "Lateral";
        case ExpansionMode::Foundational: return "Foundational";
    }
    return "Vertical";
}

std::string_view to_string(SimilarityClass v) noexcept {
    switch (v) {
        case SimilarityClass::ExactMatch: return "EXACT_MATCH";
        case SimilarityClass::FunctionalEquivalent: return "FUNCTIONAL_EQUIVALENT";
        case SimilarityClass::DifferentApproach: return "DIFFERENT_APPROACH";
    }
    return "DIFFERENT_APPROACH";
}

std::string_view to_string(QualityClass v) noexcept {
    switch (v) {
        case QualityClass::IscaWorthy: return "ISCA_WORTHY";
        case QualityClass::Incremental: return "INCREMENTAL";
        case QualityClass::Flawed: return "FLAWED";
    }
    return "FLAWED";
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::RediscoverySuccess: return "REDISCOVERY_SUCCESS";
        case Verdict::AlternativeSuccess: return "ALTERNATIVE_SUCCESS";
        case Verdict::Fail: return "FAIL";
    }
    return "FAIL";
}

ProblemSource problem_source_from(std::string_view s) {
    constexpr std::array all{ProblemSource::PaperExtraction, ProblemSource::Expansion, ProblemSource::Manual,
                             ProblemSource::TelemetryStub};
    return parse_enum(s, all, "problem source");
}

ExpansionMode expansion_mode_from(std::string_view s) { return parse_enum(s, kAllExpansionModes, "expansion mode"); }
SimilarityClass similarity_from(std::string_view s) { return parse_enum(s, kAllSimilarities, "similarity class"); }

QualityClass quality_from(std::string_view s) {
    if (text::to_upper(text::trim(s)) == "FLAWED/NAIVE") return QualityClass::Flawed;
    return parse_enum(s, kAllQualities, "quality class");
}

Verdict verdict_from(std::string_view s) {
    constexpr std::array all{Verdict::RediscoverySuccess, Verdict::AlternativeSuccess, Verdict::Fail};
    return parse_enum(s, all, "verdict");
}

Temperature::Temperature(double value) : value_(value) {
    if (!(value >= kMin && value <= kMax)) {
        throw Error(ErrorCode::InvalidArgument, "temperature " + std::to_string(value) + " outside [0.0, 2.0]");
    }
}

GeneralityScore::GeneralityScore(int value) : value_(value) {
    if (value < 1 || value > 10) {
        throw Error(ErrorCode::InvalidArgument, "generality score " + std::to_string(value) + " outside [1, 10]");
    }
}

void ProblemStatement::validate() const {
    require_text(id, "id", "problem");
    require_text(context, "context", "problem " + id);
    require_text(symptom, "symptom", "problem " + id);
    require_text(constraint, "constraint", "problem " + id);
    if (!text::contains_digit(symptom)) {
        throw Error(ErrorCode::InvalidArgument, "problem " + id + ": symptom carries no quantitative evidence");
    }
    if (generality_score) GeneralityScore{*generality_score};
    if (lineage.has_value() != (source == ProblemSource::Expansion)) {
        throw Error(ErrorCode::InvalidArgument, "problem " + id + ": lineage must be present exactly when source is expansion");
    }
    if (lineage) require_text(lineage->parent_id, "lineage.parent_id", "problem " + id);
}

std::string ProblemStatement::render() const {
    return "[CONTEXT]: " + context + "\n[SYMPTOM]: " + symptom + "\n[CONSTRAINT]: " + constraint;
}

void MechanismProposal::validate() const {
    require_text(id, "id", "proposal");
    require_text(problem_id, "problem_id", "proposal " + id);
    require_text(title, "title", "proposal " + id);
    require_text(mechanism, "mechanism", "proposal " + id);
    require_text(rationale, "rationale", "proposal " + id);
    require_text(evaluation_plan, "evaluation_plan", "proposal " + id);
    Temperature{temperature.value()};
}

void MechanismProposal::validate_against(const ProblemStatement& problem) const {
    validate();
    if (problem_id != problem.id) {
        throw Error(ErrorCode::InvalidArgument,
                    "proposal " + id + " references problem '" + problem_id + "' but was paired with '" + problem.id + "'");
    }
}

std::string MechanismProposal::render() const {
    return "Title of Paper: " + title + "\nThe Mechanism: " + mechanism + "\nWhy it Works: " + rationale +
           "\nEvaluation Plan: " + evaluation_plan;
}

RunStats aggregate_stats(std::span<const Verdict> verdicts) noexcept {
    RunStats stats;
    for (Verdict v : verdicts) {
        switch (v) {
            case Verdict::RediscoverySuccess: ++stats.n_rediscovery; break;
            case Verdict::AlternativeSuccess: ++stats.n_alternative; break;
            case Verdict::Fail: ++stats.n_fail; break;
        }
    }
    return stats;
}

std::vector<double> temperature_ladder(std::size_t n, double lo, double hi) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "temperature ladder needs at least one rung");
    if (lo > hi) throw Error(ErrorCode::InvalidArgument, "temperature ladder lo > hi");
    Temperature{lo};
    Temperature{hi};
    if (n == 1) {
        if (lo != hi) throw Error(ErrorCode::InvalidArgument, "a single-rung ladder needs lo == hi");
        return {lo};
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = std::round(t * 1e12) / 1e12;
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace gauntlet
