#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gauntlet/backend/client.hpp"
#include "gauntlet/kernel/types.hpp"
#include "gauntlet/modelforge/forge.hpp"
#include "gauntlet/store/run.hpp"

namespace gauntlet::funnel {

using json = nlohmann::json;
using backend::AgentClient;

inline constexpr int kTierCount = 6;

/// Tier index within [0, 5].
class TierId {
public:
    explicit TierId(int value);
    int value() const noexcept { return value_; }
    std::string_view name() const noexcept;
    friend bool operator==(TierId, TierId) = default;

private:
    int value_;
};

struct Candidate {
    MechanismProposal proposal;
    std::optional<ProblemStatement> problem;

    const std::string& id() const noexcept { return proposal.id; }
    /// Problem (when known) and proposal, as handed to every tier.
    std::string render() const;
};

/// JSONL: each line a proposal object or {"proposal": ..., "problem": ...}.
/// Blank lines are skipped; a malformed line throws naming its number.
std::vector<Candidate> parse_candidates(std::string_view jsonl);
std::vector<Candidate> load_candidates(const std::filesystem::path& path);

struct TierDecision {
    std::string candidate_id;
    int tier = 0;
    bool passed = false;
    std::string feedback;  // non-empty when failed
    std::vector<std::string> flags;
    json details = json::object();
};

struct ChecklistItem {
    std::string id;
    std::string question;
};

std::vector<ChecklistItem> default_checklist();

struct ExpertScorecard {
    std::string expert_id;
    std::string persona;
    std::vector<std::pair<std::string, int>> dimension_scores;
    bool approve = false;
    std::vector<std::string> issues;
    std::string error;  // set when the reply never parsed
};

struct Expert {
    std::string id;
    std::string persona;
    std::string charter;
};

/// microarchitecture, simulation-methodology, workloads, systems-integration.
const std::vector<Expert>& tier1_experts();
inline constexpr std::array<std::string_view, 4> kScoreDimensions = {"novelty", "feasibility", "evaluation-rigor",
                                                                     "system-impact"};

struct AnalyticalEstimate {
    bool passed = false;
    json metrics = json::object();
    std::string diagnostics;
};

/// Returns nullopt when it has no model for the candidate.
using AnalyticalHook = std::function<std::optional<AnalyticalEstimate>(const Candidate&)>;

/// Runs the registered forge model of the first domain keyword (in key
/// order) found in the candidate text. Its stdout lines name=value become
/// metrics; "pass=false" or a failed execution fails the candidate.
AnalyticalHook domain_model_hook(std::map<std::string, std::string> programs_by_domain,
                                 modelforge::Sandbox& sandbox, std::filesystem::path work_root);

TierDecision tier0_filter(const Candidate& c, AgentClient& client,
                          const std::vector<ChecklistItem>& checklist = default_checklist());

std::pair<std::vector<ExpertScorecard>, TierDecision> tier1_adversarial(const Candidate& c, AgentClient& client,
                                                                         int consensus = 4);

TierDecision tier2_analytical(const Candidate& c, const AnalyticalHook* hook, bool strict = false);

TierDecision tier3_simulate(const Candidate& c, AgentClient& client, modelforge::Sandbox& sandbox,
                            const std::filesystem::path& work_root, const modelforge::ForgeConfig& forge = {});

struct FunnelConfig {
    std::array<bool, kTierCount> enabled{true, true, true, true, true, true};
    /// Maximum passes per tier, granted in candidate order.
    std::array<std::optional<std::size_t>, kTierCount> quotas{};
    int consensus = 4;
    std::vector<ChecklistItem> checklist = default_checklist();
    bool strict_tier2 = false;
    AnalyticalHook tier2_hook;
    modelforge::ForgeConfig forge;
    /// Candidates evaluated concurrently within a tier; 0 means the client's max_parallel.
    std::size_t width = 0;

    void validate() const;
};

struct TierCount {
    int tier = 0;
    bool enabled = true;
    std::size_t entered = 0;
    std::size_t passed = 0;
    std::optional<std::size_t> quota;
    std::string note;
};

struct FunnelLedger {
    std::array<TierCount, kTierCount> tiers{};
    std::vector<TierDecision> decisions;  // tier order, then candidate order
    std::vector<std::string> warnings;

    /// Chain conservation, pass bounds, monotone fidelity and feedback presence.
    std::vector<std::string> invariant_violations() const;
};

FunnelLedger run_funnel(std::span<const Candidate> candidates, const FunnelConfig& config, AgentClient& client,
                        modelforge::Sandbox* sandbox, const std::filesystem::path& work_root);

json to_json(const TierDecision& d);
json to_json(const ExpertScorecard& s);
json to_json(const FunnelLedger& l);

/// ledger.json plus feedback/{candidate}.json for every failure.
store::ArtifactSet funnel_artifacts(const FunnelLedger& ledger, std::string_view prefix = "funnel/");

/// Reads feedback/*.json files (sorted by name) back as notes for the
/// architect prompt, keeping at most `max_notes`.
std::vector<std::string> load_feedback_notes(const std::filesystem::path& feedback_dir, std::size_t max_notes = 20);

}  // namespace gauntlet::funnel
