#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gauntlet/kernel/types.hpp"

// Reply parsers. Each throws backend::ParseError naming what is missing.
namespace gauntlet::ideation::parse {

struct ProblemFields {
    std::string context;
    std::string symptom;
    std::string constraint;
};

/// [CONTEXT]/[SYMPTOM]/[CONSTRAINT]; the symptom must contain a number.
ProblemFields problem_fields(std::string_view reply);

struct GeneralityReply {
    int score = 0;
    std::string critique;
};

GeneralityReply generality(std::string_view reply);

struct LeakJudgeReply {
    bool reveals = false;
    std::string evidence;
};

LeakJudgeReply leak_judge(std::string_view reply);

struct ArchitectReply {
    std::string title;
    std::string mechanism;
    std::string rationale;
    std::string evaluation_plan;
};

ArchitectReply architect(std::string_view reply);

struct JudgmentReply {
    std::optional<SimilarityClass> similarity;
    QualityClass quality = QualityClass::Flawed;
    std::string justification;
};

/// Any verdict the model states is ignored; only the two axes are read.
JudgmentReply judgment(std::string_view reply, bool require_similarity);

}  // namespace gauntlet::ideation::parse
