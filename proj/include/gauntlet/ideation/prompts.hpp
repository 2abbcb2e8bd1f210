#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gauntlet/backend/request.hpp"
#include "gauntlet/kernel/types.hpp"

// Prompt builders for the ideation agents. Role names are stable: mock
// scripts and transcripts key on them.
namespace gauntlet::ideation::prompts {

inline constexpr std::string_view kExtractorRole = "extractor";
inline constexpr std::string_view kQcRole = "qc";
inline constexpr std::string_view kRepairRole = "repair";
inline constexpr std::string_view kLeakJudgeRole = "leak-judge";
inline constexpr std::string_view kArchitectRole = "architect";
inline constexpr std::string_view kValidatorRole = "validator";

std::string expander_role(ExpansionMode mode);

backend::AgentRequest extraction(std::string_view window, std::string tag);
backend::AgentRequest generality(const ProblemStatement& problem, std::string tag);
backend::AgentRequest repair(const ProblemStatement& problem, std::string_view critique, std::string tag);
backend::AgentRequest leak_judge(const ProblemStatement& problem, std::string_view full_text, std::string tag);
backend::AgentRequest architect(const ProblemStatement& problem, double temperature, std::string_view domain_focus,
                                std::string_view feedback, std::string tag);
/// Without ground truth the request asks for the quality axis only.
backend::AgentRequest validator(const MechanismProposal& proposal, std::optional<std::string_view> ground_truth,
                                std::string tag);
backend::AgentRequest expander(ExpansionMode mode, const ProblemStatement& problem, const MechanismProposal& fix,
                               std::string tag);

}  // namespace gauntlet::ideation::prompts
