#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gauntlet {

enum class ProblemSource { PaperExtraction, Expansion, Manual, TelemetryStub };
enum class ExpansionMode { Vertical, Lateral, Foundational };
enum class SimilarityClass { ExactMatch, FunctionalEquivalent, DifferentApproach };
enum class QualityClass { IscaWorthy, Incremental, Flawed };
enum class Verdict { RediscoverySuccess, AlternativeSuccess, Fail };

inline constexpr std::array kAllExpansionModes{ExpansionMode::Vertical, ExpansionMode::Lateral,
                                               ExpansionMode::Foundational};
inline constexpr std::array kAllSimilarities{SimilarityClass::ExactMatch, SimilarityClass::FunctionalEquivalent,
                                             SimilarityClass::DifferentApproach};
inline constexpr std::array kAllQualities{QualityClass::IscaWorthy, QualityClass::Incremental,
                                          QualityClass::Flawed};

std::string_view to_string(ProblemSource v) noexcept;
std::string_view to_string(ExpansionMode v) noexcept;
std::string_view to_string(SimilarityClass v) noexcept;
std::string_view to_string(QualityClass v) noexcept;
std::string_view to_string(Verdict v) noexcept;

// Parsers accept the canonical spelling (case-insensitive); throw Error on
// anything else.
ProblemSource problem_source_from(std::string_view s);
ExpansionMode expansion_mode_from(std::string_view s);
SimilarityClass similarity_from(std::string_view s);
QualityClass quality_from(std::string_view s);
Verdict verdict_from(std::string_view s);

/// Sampling temperature, always within [0.0, 2.0].
class Temperature {
public:
    static constexpr double kMin = 0.0;
    static constexpr double kMax = 2.0;

    Temperature() = default;
    explicit Temperature(double value);

    double value() const noexcept { return value_; }
    friend bool operator==(Temperature, Temperature) = default;

private:
    double value_ = 0.0;
};

/// 1-10 generality rating of a problem's symptom.
class GeneralityScore {
public:
    explicit GeneralityScore(int value);
    int value() const noexcept { return value_; }
    friend bool operator==(GeneralityScore, GeneralityScore) = default;

private:
    int value_;
};

struct Lineage {
    std::string parent_id;
    ExpansionMode mode = ExpansionMode::Vertical;
    friend bool operator==(const Lineage&, const Lineage&) = default;
};

/// Canonical [CONTEXT]/[SYMPTOM]/[CONSTRAINT] problem record.
struct ProblemStatement {
    std::string id;
    ProblemSource source = ProblemSource::Manual;
    std::string context;
    std::string symptom;
    std::string constraint;
    std::optional<int> generality_score;
    std::optional<Lineage> lineage;

    /// Throws Error(InvalidArgument) when an invariant is broken: empty
    /// fields, a symptom without any quantitative evidence, a score outside
    /// [1,10], or lineage disagreeing with the source.
    void validate() const;

    /// The three canonical fields rendered as labelled text.
    std::string render() const;

    friend bool operator==(const ProblemStatement&, const ProblemStatement&) = default;
};

/// One architect-agent output.
struct MechanismProposal {
    std::string id;
    std::string problem_id;
    std::string title;
    std::string mechanism;
    std::string rationale;
    std::string evaluation_plan;
    Temperature temperature;

    void validate() const;
    /// Also checks that problem_id names `problem`.
    void validate_against(const ProblemStatement& problem) const;
    std::string render() const;

    friend bool operator==(const MechanismProposal&, const MechanismProposal&) = default;
};

/// The dual-axis rubric. Total over all nine input pairs.
constexpr Verdict classify_verdict(SimilarityClass sim, QualityClass qual) noexcept {
    if (qual != QualityClass::IscaWorthy) return Verdict::Fail;
    return sim == SimilarityClass::DifferentApproach ? Verdict::AlternativeSuccess : Verdict::RediscoverySuccess;
}

constexpr bool is_viable(Verdict v) noexcept { return v != Verdict::Fail; }

/// Orders verdicts best-first: rediscovery, then alternative, then fail.
constexpr int verdict_rank(Verdict v) noexcept {
    switch (v) {
        case Verdict::RediscoverySuccess: return 0;
        case Verdict::AlternativeSuccess: return 1;
        case Verdict::Fail: return 2;
    }
    return 2;
}

/// Verdict counts. Rates are derived on read so they can never drift from
/// the counts they summarise.
struct RunStats {
    std::size_t n_rediscovery = 0;
    std::size_t n_alternative = 0;
    std::size_t n_fail = 0;

    std::size_t n_total() const noexcept { return n_rediscovery + n_alternative + n_fail; }
    std::size_t n_viable() const noexcept { return n_rediscovery + n_alternative; }
    double viable_rate() const noexcept { return rate(n_viable()); }
    double rediscovery_rate() const noexcept { return rate(n_rediscovery); }
    double alternative_rate() const noexcept { return rate(n_alternative); }
    double fail_rate() const noexcept { return rate(n_fail); }

    friend bool operator==(const RunStats&, const RunStats&) = default;

private:
    double rate(std::size_t n) const noexcept {
        const auto total = n_total();
        return total == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(total);
    }
};

RunStats aggregate_stats(std::span<const Verdict> verdicts) noexcept;

/// `n` evenly spaced temperatures from `lo` to `hi` inclusive. Endpoints are
/// exact; interior points are rounded to 12 decimals so that 0.6 prints as 0.6.
std::vector<double> temperature_ladder(std::size_t n, double lo, double hi);

}  // namespace gauntlet
