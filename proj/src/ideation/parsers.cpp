#include "gauntlet/ideation/parsers.hpp"

#include <cctype>

#include "gauntlet/backend/client.hpp"
#include "gauntlet/util/text.hpp"

namespace gauntlet::ideation::parse {

using backend::ParseError;

namespace {

std::string require(const std::optional<std::string>& v, std::string_view label) {
    if (!v || v->empty()) throw ParseError("missing or empty " + std::string(label) + " field");
    return *v;
}

std::optional<int> first_integer(std::string_view s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            int v = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) && v < 1000) {
                v = v * 10 + (s[i] - '0');
                ++i;
            }
            return v;
        }
    }
    return std::nullopt;
}

}  // namespace

ProblemFields problem_fields(std::string_view reply) {
    const auto v = text::parse_labeled(reply, {"CONTEXT", "SYMPTOM", "CONSTRAINT"});
    ProblemFields f{require(v[0], "[CONTEXT]"), require(v[1], "[SYMPTOM]"), require(v[2], "[CONSTRAINT]")};
    if (!text::contains_digit(f.symptom)) {
        throw ParseError("[SYMPTOM] carries no quantitative evidence (no number)");
    }
    return f;
}

GeneralityReply generality(std::string_view reply) {
    const auto v = text::parse_labeled(reply, {"GENERALITY_SCORE", "CRITIQUE"});
    const auto raw = require(v[0], "GENERALITY_SCORE");
    const auto score = first_integer(raw);
    if (!score || *score < 1 || *score > 10) throw ParseError("GENERALITY_SCORE must be an integer from 1 to 10");
    return {*score, v[1].value_or("")};
}

LeakJudgeReply leak_judge(std::string_view reply) {
    const auto v = text::parse_labeled(reply, {"REVEALS_MECHANISM", "EVIDENCE"});
    const auto raw = require(v[0], "REVEALS_MECHANISM");
    const auto k = text::first_keyword(raw, {"YES", "NO"});
    if (!k) throw ParseError("REVEALS_MECHANISM must be YES or NO");
    return {*k == 0, v[1].value_or("")};
}

ArchitectReply architect(std::string_view reply) {
    const auto v = text::parse_labeled(reply, {"Title of Paper", "The Mechanism", "Why it Works", "Evaluation Plan"});
    return {require(v[0], "Title of Paper"), require(v[1], "The Mechanism"), require(v[2], "Why it Works"),
            require(v[3], "Evaluation Plan")};
}

JudgmentReply judgment(std::string_view reply, bool require_similarity) {
    const auto v = text::parse_labeled(reply, {"SIMILARITY", "QUALITY", "JUSTIFICATION", "VERDICT"});
    JudgmentReply out;
    if (require_similarity) {
        const auto raw = require(v[0], "SIMILARITY");
        const auto k = text::first_keyword(raw, {"EXACT_MATCH", "FUNCTIONAL_EQUIVALENT", "DIFFERENT_APPROACH"});
        if (!k) throw ParseError("SIMILARITY must be EXACT_MATCH, FUNCTIONAL_EQUIVALENT or DIFFERENT_APPROACH");
        out.similarity = kAllSimilarities[*k];
    }
    const auto raw = require(v[1], "QUALITY");
    const auto k = text::first_keyword(raw, {"ISCA_WORTHY", "INCREMENTAL", "FLAWED", "NAIVE"});
    if (!k) throw ParseError("QUALITY must be ISCA_WORTHY, INCREMENTAL or FLAWED");
    out.quality = *k == 3 ? QualityClass::Flawed : kAllQualities[*k];
    out.justification = v[2].value_or("");
    return out;
}

}  // namespace gauntlet::ideation::parse
