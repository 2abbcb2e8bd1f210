#include "gauntlet/funnel/funnel.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/util/parallel.hpp"
#include "gauntlet/util/text.hpp"

namespace gauntlet::funnel {

using backend::AgentRequest;
using backend::ask_structured;
using backend::ParseError;

namespace {

constexpr std::array<std::string_view, kTierCount> kTierNames = {
    "first-principles", "adversarial-panel", "analytical-model", "purpose-built-simulation", "full-simulation",
    "rtl-prototype"};

AgentRequest make(std::string role, std::string system, std::string user, std::string tag) {
    AgentRequest r;
    r.role_name = std::move(role);
    r.system_prompt = std::move(system);
    r.user_prompt = std::move(user);
    r.temperature = Temperature{0.0};
    r.request_tag = std::move(tag);
    r.max_output = 2048;
    return r;
}

std::string candidate_block(const Candidate& c) {
    return "[CANDIDATE " + c.id() + "]\n" + c.render() + "\n[END CANDIDATE]\n";
}

TierDecision decision(const Candidate& c, int tier, bool passed, std::string feedback) {
    TierDecision d;
    d.candidate_id = c.id();
    d.tier = tier;
    d.passed = passed;
    d.feedback = std::move(feedback);
    return d;
}

struct Tier0Reply {
    bool pass = false;
    std::string violation;
    std::string reason;
};

Tier0Reply parse_tier0(std::string_view reply, const std::vector<ChecklistItem>& checklist) {
    const auto v = text::parse_labeled(reply, {"DECISION", "VIOLATION", "REASON"});
    if (!v[0]) throw ParseError("missing 'DECISION: PASS|FAIL' line");
    const auto k = text::first_keyword(*v[0], {"PASS", "FAIL"});
    if (!k) throw ParseError("DECISION must be PASS or FAIL");
    Tier0Reply r;
    r.pass = *k == 0;
    r.reason = v[2].value_or("");
    if (r.pass) return r;
    std::vector<std::string> ids;
    for (const auto& item : checklist) ids.push_back(item.id);
    if (!v[1]) throw ParseError("a FAIL decision must name the violated checklist item");
    const auto hit = text::first_keyword(*v[1], ids);
    if (!hit) throw ParseError("VIOLATION '" + text::trim(*v[1]) + "' is not a checklist item");
    r.violation = ids[*hit];
    return r;
}

ExpertScorecard parse_scorecard(std::string_view reply, const Expert& expert) {
    const auto v = text::parse_labeled(reply, {"SCORES", "APPROVE", "ISSUES"});
    if (!v[0]) throw ParseError("missing 'SCORES:' block");
    if (!v[1]) throw ParseError("missing 'APPROVE: YES|NO' line");
    ExpertScorecard s;
    s.expert_id = expert.id;
    s.persona = expert.persona;
    std::map<std::string, int> seen;
    for (const auto& item : text::parse_bullets(*v[0])) {
        const auto colon = item.find_first_of(":=");
        if (colon == std::string::npos) continue;
        const auto dim = text::to_lower(text::trim(item.substr(0, colon)));
        const auto val = text::trim(item.substr(colon + 1));
        int score = -1;
        auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), score);
        if (ec != std::errc{}) throw ParseError("score for '" + dim + "' is not an integer");
        if (score < 0 || score > 10) throw ParseError("score for '" + dim + "' lies outside 0-10");
        seen[dim] = score;
    }
    for (auto dim : kScoreDimensions) {
        auto it = seen.find(std::string(dim));
        if (it == seen.end()) throw ParseError("SCORES lacks the '" + std::string(dim) + "' dimension");
        s.dimension_scores.emplace_back(std::string(dim), it->second);
    }
    const auto k = text::first_keyword(*v[1], {"YES", "NO"});
    if (!k) throw ParseError("APPROVE must be YES or NO");
    s.approve = *k == 0;
    if (v[2]) {
        for (auto& item : text::parse_bullets(*v[2])) {
            const auto low = text::to_lower(text::trim(item));
            if (low.empty() || low == "none" || low == "none." || low == "n/a") continue;
            s.issues.push_back(text::trim(item));
        }
    }
    return s;
}

bool has_flag(const TierDecision& d, std::string_view flag) {
    return std::find(d.flags.begin(), d.flags.end(), flag) != d.flags.end();
}

json parse_metric(const std::string& value) {
    double d = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
    if (ec == std::errc{} && p == value.data() + value.size()) return d;
    if (value == "true") return true;
    if (value == "false") return false;
    return value;
}

}  // namespace

TierId::TierId(int value) : value_(value) {
    if (value < 0 || value >= kTierCount) {
        throw Error(ErrorCode::InvalidArgument, "tier " + std::to_string(value) + " outside 0-5");
    }
}

std::string_view TierId::name() const noexcept { return kTierNames[static_cast<std::size_t>(value_)]; }

std::string Candidate::render() const {
    std::string out;
    if (problem) out += "[PROBLEM]\n" + problem->render() + "\n\n";
    out += "[PROPOSAL]\n" + proposal.render();
    return out;
}

std::vector<Candidate> parse_candidates(std::string_view jsonl) {
    std::vector<Candidate> out;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto where = "candidates line " + std::to_string(line_no);
        try {
            const json j = json::parse(line);
            if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "not a JSON object");
            Candidate c;
            if (j.contains("proposal")) {
                require_known_keys(j, {"proposal", "problem"}, "candidate");
                c.proposal = j.at("proposal").get<MechanismProposal>();
                if (j.contains("problem") && !j.at("problem").is_null()) {
                    c.problem = j.at("problem").get<ProblemStatement>();
                    c.problem->validate();
                }
            } else {
                c.proposal = j.get<MechanismProposal>();
            }
            if (c.problem) c.proposal.validate_against(*c.problem);
            else c.proposal.validate();
            if (!ids.insert(c.id()).second) throw Error(ErrorCode::InvalidArgument, "duplicate candidate id " + c.id());
            out.push_back(std::move(c));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidArgument, where + ": " + e.what());
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidArgument, where + ": " + e.detail());
        }
    }
    return out;
}

std::vector<Candidate> load_candidates(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read candidates file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_candidates(ss.str());
}

std::vector<ChecklistItem> default_checklist() {
    return {
        {"causality",
         "Does the mechanism act on information that cannot exist yet at the moment it must act, such as a "
         "result computed later in the pipeline or an address not yet generated?"},
        {"perfect-prediction",
         "Does the mechanism assume oracle knowledge: perfect prediction of future accesses, branches, reuse "
         "distances or program phases, or unbounded storage for its history?"},
        {"edge-cases",
         "Does the mechanism ignore edge cases that decide correctness or cost: coherence and consistency, "
         "context switches, exceptions, pathological inputs, capacity overflow?"},
    };
}

const std::vector<Expert>& tier1_experts() {
    static const std::vector<Expert> experts = {
        {"microarchitecture", "Dr. Archi",
         "How does this actually work in silicon, and what are they glossing over? Hunt for hidden storage, "
         "ports, critical-path and verification cost."},
        {"simulation-methodology", "Dr. Sim",
         "Can I trust these numbers? Where is the RTL? Where are the artifacts? Check that the evaluation plan "
         "can measure what it claims, with adequate warm-up, sampling and baselines."},
        {"workloads", "Prof. Bench",
         "Are these benchmarks representative? Is the baseline fair? Check that the target behaviour occurs in "
         "workloads people run."},
        {"systems-integration", "Prof. Sys",
         "Does this compose with real systems? What about OS, networking, multi-tenancy, virtualization and "
         "security?"},
    };
    return experts;
}

TierDecision tier0_filter(const Candidate& c, AgentClient& client, const std::vector<ChecklistItem>& checklist) {
    std::string items;
    for (const auto& item : checklist) items += "- [" + item.id + "] " + item.question + "\n";
    const std::string system =
        "You are a first-principles screener for hardware mechanism proposals. You reject a proposal only for "
        "a concrete violation of the checklist.";
    const std::string user = candidate_block(c) + "\n[CHECKLIST]\n" + items +
                             "\nReply with:\nDECISION: PASS or FAIL\nVIOLATION: <checklist id, when FAIL>\n"
                             "REASON: <one paragraph>\n";
    const auto response = client.complete(make("tier0-filter", system, user, "funnel/" + c.id() + "/tier0"));
    TierDecision d = decision(c, 0, false, "");
    try {
        const auto r = parse_tier0(response.text, checklist);
        d.passed = r.pass;
        d.details = json{{"reason", r.reason}};
        if (!r.pass) {
            d.feedback = "violates " + r.violation + (r.reason.empty() ? "" : ": " + r.reason);
            d.flags.push_back(r.violation);
            d.details["violation"] = r.violation;
        }
    } catch (const ParseError& e) {
        d.feedback = std::string("unevaluable: ") + e.what();
        d.flags.push_back("unevaluable");
    }
    return d;
}

std::pair<std::vector<ExpertScorecard>, TierDecision> tier1_adversarial(const Candidate& c, AgentClient& client,
                                                                         int consensus) {
    const auto& experts = tier1_experts();
    if (consensus < 1 || consensus > static_cast<int>(experts.size())) {
        throw Error(ErrorCode::Configuration, "consensus must lie in 1-4");
    }
    std::string format = "Reply with:\nSCORES:\n";
    for (auto dim : kScoreDimensions) format += "- " + std::string(dim) + ": <0-10>\n";
    format += "APPROVE: YES or NO\nISSUES:\n- <most important issue first, or none>\n";

    auto cards = parallel_map(experts.size(), experts.size(), [&](std::size_t i) {
        const auto& e = experts[i];
        const std::string system = "You are " + e.persona + ", the " + e.id +
                                   " expert on an adversarial review board. Your standing question: " + e.charter;
        const std::string user = candidate_block(c) + "\nScore the mechanism and decide whether it may advance.\n" +
                                 format;
        auto req = make("tier1-" + e.id, system, user, "funnel/" + c.id() + "/tier1/" + e.id);
        try {
            return ask_structured(
                client, req, [&](std::string_view reply) { return parse_scorecard(reply, e); },
                ErrorCode::ValidationFailed);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::ValidationFailed) throw;
            ExpertScorecard s;
            s.expert_id = e.id;
            s.persona = e.persona;
            s.error = err.detail();
            s.issues.push_back("unparseable scorecard: " + err.detail());
            return s;
        }
    });

    int approvals = 0;
    std::string feedback;
    json jcards = json::array();
    for (const auto& s : cards) {
        jcards.push_back(to_json(s));
        if (s.approve) {
            ++approvals;
            continue;
        }
        if (!feedback.empty()) feedback += "; ";
        feedback += s.expert_id + " (" + s.persona + ") dissents: " +
                    (s.issues.empty() ? std::string("no issue stated") : s.issues.front());
    }
    TierDecision d = decision(c, 1, approvals >= consensus, "");
    if (!d.passed) d.feedback = std::to_string(approvals) + "/4 approvals, " + std::to_string(consensus) +
                                " required. " + feedback;
    d.details = json{{"approvals", approvals}, {"consensus", consensus}, {"scorecards", std::move(jcards)}};
    return {std::move(cards), std::move(d)};
}

TierDecision tier2_analytical(const Candidate& c, const AnalyticalHook* hook, bool strict) {
    constexpr std::string_view kNoModel = "no analytical model registered";
    auto no_model = [&] {
        TierDecision d = decision(c, 2, !strict, std::string(kNoModel));
        d.flags.push_back("no-model");
        return d;
    };
    if (!hook || !*hook) return no_model();
    std::optional<AnalyticalEstimate> est;
    try {
        est = (*hook)(c);
    } catch (const std::exception& e) {
        TierDecision d = decision(c, 2, false, std::string("analytical model crashed: ") + e.what());
        d.flags.push_back("hook-crash");
        d.details = json{{"diagnostics", e.what()}};
        return d;
    }
    if (!est) return no_model();
    TierDecision d = decision(c, 2, est->passed, "");
    d.details = json{{"metrics", est->metrics}, {"diagnostics", est->diagnostics}};
    if (!est->passed) {
        d.feedback = "analytical estimate rejects the mechanism";
        if (!est->diagnostics.empty()) d.feedback += ": " + est->diagnostics;
    }
    return d;
}

AnalyticalHook domain_model_hook(std::map<std::string, std::string> programs_by_domain, modelforge::Sandbox& sandbox,
                                 std::filesystem::path work_root) {
    return [programs = std::move(programs_by_domain), &sandbox,
            root = std::move(work_root)](const Candidate& c) -> std::optional<AnalyticalEstimate> {
        const auto body = c.render();
        for (const auto& [domain, program] : programs) {
            if (!text::contains_ci(body, domain)) continue;
            const auto dir = root / text::safe_component(c.id()) / text::safe_component(domain);
            const auto report = sandbox.run(program, dir);
            AnalyticalEstimate est;
            if (!report.success()) {
                est.passed = false;
                est.diagnostics = "model for '" + domain + "' failed: " + report.failure_reason();
                return est;
            }
            est.passed = true;
            est.metrics["domain"] = domain;
            for (const auto& line : text::split_lines(report.stdout_text)) {
                const auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                const auto key = text::trim(line.substr(0, eq));
                const auto value = text::trim(line.substr(eq + 1));
                if (key.empty()) continue;
                if (key == "pass") {
                    est.passed = text::to_lower(value) != "false";
                    continue;
                }
                est.metrics[key] = parse_metric(value);
            }
            if (!est.passed) est.diagnostics = "model for '" + domain + "' reported pass=false";
            return est;
        }
        return std::nullopt;
    };
}

TierDecision tier3_simulate(const Candidate& c, AgentClient& client, modelforge::Sandbox& sandbox,
                            const std::filesystem::path& work_root, const modelforge::ForgeConfig& forge) {
    modelforge::ForgeResult result;
    try {
        result = modelforge::run_forge(c.id(), c.render(), client, sandbox, work_root, forge);
    } catch (const modelforge::ForgeFailedError& e) {
        TierDecision d = decision(c, 3, false, "forge failed: " + e.detail());
        d.flags.push_back("forge-failed");
        return d;
    }
    TierDecision d = decision(c, 3, false, "");
    d.details = json{{"warnings", result.warnings}};
    if (!result.pick.chosen_run_index) {
        d.feedback = "no forge run was eligible for selection";
        d.flags.push_back("no-pick");
        return d;
    }
    const auto k = *result.pick.chosen_run_index;
    d.details["chosen_run_index"] = k;
    const auto it = std::find_if(result.runs.begin(), result.runs.end(),
                                 [k](const modelforge::ForgeRun& r) { return r.run_index == k; });
    if (it == result.runs.end() || !it->phase2) {
        d.feedback = "chosen forge run " + std::to_string(k) + " has no model artifact";
        return d;
    }
    const auto& exec = it->phase2->artifact.execution;
    d.details["model_output"] = exec.stdout_text;
    if (!exec.success()) {
        d.feedback = "chosen model did not execute: " + exec.failure_reason();
        d.flags.push_back("execution-failed");
        return d;
    }
    if (it->interpretation && it->interpretation->infeasible) {
        d.feedback = "magic-gap analysis flags the claim as infeasible: " + it->interpretation->magic_gaps;
        d.flags.push_back("infeasible");
        return d;
    }
    d.passed = true;
    return d;
}

void FunnelConfig::validate() const {
    if (consensus < 1 || consensus > 4) throw Error(ErrorCode::Configuration, "consensus must lie in 1-4");
    if (checklist.empty()) throw Error(ErrorCode::Configuration, "tier 0 checklist is empty");
    std::set<std::string> ids;
    for (const auto& item : checklist) {
        if (item.id.empty() || item.question.empty()) {
            throw Error(ErrorCode::Configuration, "checklist items need an id and a question");
        }
        if (!ids.insert(item.id).second) throw Error(ErrorCode::Configuration, "duplicate checklist id " + item.id);
    }
    if (forge.runs == 0) throw Error(ErrorCode::Configuration, "forge runs must be positive");
}

FunnelLedger run_funnel(std::span<const Candidate> candidates, const FunnelConfig& config, AgentClient& client,
                        modelforge::Sandbox* sandbox, const std::filesystem::path& work_root) {
    config.validate();
    if (config.enabled[3] && !sandbox) {
        throw Error(ErrorCode::Configuration, "tier 3 is enabled but no sandbox was supplied");
    }
    {
        std::set<std::string> ids;
        for (const auto& c : candidates) {
            if (!ids.insert(c.id()).second) throw Error(ErrorCode::InvalidArgument, "duplicate candidate id " + c.id());
        }
    }
    const std::size_t width =
        config.width > 0 ? config.width : static_cast<std::size_t>(std::max(1, client.max_parallel()));

    FunnelLedger ledger;
    std::vector<const Candidate*> current;
    for (const auto& c : candidates) current.push_back(&c);
    std::size_t no_model = 0;

    auto evaluate = [&](int tier, const Candidate& c) -> TierDecision {
        try {
            switch (tier) {
                case 0: return tier0_filter(c, client, config.checklist);
                case 1: return tier1_adversarial(c, client, config.consensus).second;
                case 2: return tier2_analytical(c, config.tier2_hook ? &config.tier2_hook : nullptr,
                                                config.strict_tier2);
                case 3:
                    return tier3_simulate(c, client, *sandbox, work_root / "tier3" / text::safe_component(c.id()),
                                          config.forge);
                default: {
                    TierDecision d = decision(c, tier, true, "");
                    d.flags.push_back("not implemented");
                    return d;
                }
            }
        } catch (const std::exception& e) {
            TierDecision d = decision(c, tier, false, std::string("evaluation error: ") + e.what());
            d.flags.push_back("error");
            return d;
        }
    };

    for (int tier = 0; tier < kTierCount; ++tier) {
        auto& count = ledger.tiers[static_cast<std::size_t>(tier)];
        count.tier = tier;
        count.enabled = config.enabled[static_cast<std::size_t>(tier)];
        count.quota = config.quotas[static_cast<std::size_t>(tier)];
        count.entered = current.size();
        if (tier >= 4) count.note = "not implemented";
        if (!count.enabled) count.note = "disabled";

        std::vector<TierDecision> decided;
        decided.reserve(current.size());
        // Batches never exceed the remaining quota, so no pass is granted and
        // then revoked; later candidates are simply not evaluated. A disabled
        // tier passes candidates through but still honours its quota.
        std::size_t next = 0;
        std::size_t passes = 0;
        while (next < current.size()) {
            std::size_t batch = current.size() - next;
            if (count.quota) {
                if (passes >= *count.quota) break;
                batch = std::min(batch, *count.quota - passes);
            }
            std::vector<TierDecision> results;
            if (count.enabled) {
                results = parallel_map(batch, width, [&](std::size_t i) { return evaluate(tier, *current[next + i]); });
            } else {
                for (std::size_t i = 0; i < batch; ++i) {
                    results.push_back(decision(*current[next + i], tier, true, ""));
                    results.back().flags.push_back("disabled");
                }
            }
            for (auto& d : results) {
                passes += d.passed ? 1 : 0;
                decided.push_back(std::move(d));
            }
            next += batch;
        }
        for (; next < current.size(); ++next) {
            decided.push_back(decision(*current[next], tier, false,
                                       "tier quota of " + std::to_string(*count.quota) + " exhausted"));
            decided.back().flags.push_back("quota-exhausted");
        }

        std::vector<const Candidate*> survivors;
        for (std::size_t i = 0; i < decided.size(); ++i) {
            if (decided[i].passed) survivors.push_back(current[i]);
            if (tier == 2 && has_flag(decided[i], "no-model")) ++no_model;
        }
        count.passed = survivors.size();
        for (auto& d : decided) ledger.decisions.push_back(std::move(d));
        current = std::move(survivors);
    }
    if (no_model > 0) {
        ledger.warnings.push_back("tier 2: no analytical model registered for " + std::to_string(no_model) +
                                  (config.strict_tier2 ? " candidates; strict mode failed them"
                                                       : " candidates; passed through unchecked"));
    }
    return ledger;
}

std::vector<std::string> FunnelLedger::invariant_violations() const {
    std::vector<std::string> out;
    std::array<std::size_t, kTierCount> decided{};
    std::array<std::size_t, kTierCount> passed_decisions{};
    std::array<std::set<std::string>, kTierCount> passed_ids;
    for (const auto& d : decisions) {
        if (d.tier < 0 || d.tier >= kTierCount) {
            out.push_back("decision for " + d.candidate_id + " has tier " + std::to_string(d.tier));
            continue;
        }
        const auto t = static_cast<std::size_t>(d.tier);
        ++decided[t];
        if (d.passed) {
            ++passed_decisions[t];
            passed_ids[t].insert(d.candidate_id);
        } else if (text::trim(d.feedback).empty()) {
            out.push_back("failed decision for " + d.candidate_id + " at tier " + std::to_string(d.tier) +
                          " has no feedback");
        }
        for (int k = 0; k < d.tier; ++k) {
            if (!passed_ids[static_cast<std::size_t>(k)].count(d.candidate_id)) {
                out.push_back(d.candidate_id + " reached tier " + std::to_string(d.tier) + " without passing tier " +
                              std::to_string(k));
            }
        }
        if (d.tier == 1 && d.details.contains("scorecards")) {
            int approvals = 0;
            for (const auto& s : d.details["scorecards"]) approvals += s.value("approve", false) ? 1 : 0;
            const int need = d.details.value("consensus", 4);
            if ((approvals >= need) != d.passed) {
                out.push_back("tier 1 decision for " + d.candidate_id + " disagrees with its scorecards");
            }
        }
    }
    for (std::size_t t = 0; t < kTierCount; ++t) {
        const auto& c = tiers[t];
        const auto label = "tier " + std::to_string(t);
        if (c.passed > c.entered) out.push_back(label + ": passed exceeds entered");
        if (t > 0 && c.entered != tiers[t - 1].passed) out.push_back(label + ": entered differs from prior passed");
        if (decided[t] != c.entered) out.push_back(label + ": decision count differs from entered");
        if (passed_decisions[t] != c.passed) out.push_back(label + ": pass decisions differ from passed");
        if (c.quota && c.passed > *c.quota) out.push_back(label + ": passed exceeds quota");
    }
    return out;
}

json to_json(const TierDecision& d) {
    json j{{"candidate_id", d.candidate_id},
           {"tier", d.tier},
           {"tier_name", TierId(d.tier).name()},
           {"passed", d.passed},
           {"feedback", d.feedback},
           {"flags", d.flags}};
    if (!d.details.empty()) j["details"] = d.details;
    return j;
}

json to_json(const ExpertScorecard& s) {
    json scores = json::object();
    for (const auto& [dim, v] : s.dimension_scores) scores[dim] = v;
    json j{{"expert_id", s.expert_id},
           {"persona", s.persona},
           {"dimension_scores", std::move(scores)},
           {"approve", s.approve},
           {"issues", s.issues}};
    if (!s.error.empty()) j["error"] = s.error;
    return j;
}

json to_json(const FunnelLedger& l) {
    json tiers = json::array();
    for (const auto& t : l.tiers) {
        tiers.push_back(json{{"tier", t.tier},
                             {"name", TierId(t.tier).name()},
                             {"enabled", t.enabled},
                             {"entered", t.entered},
                             {"passed", t.passed},
                             {"quota", t.quota ? json(*t.quota) : json(nullptr)},
                             {"note", t.note}});
    }
    json decisions = json::array();
    for (const auto& d : l.decisions) decisions.push_back(to_json(d));
    return json{{"tiers", std::move(tiers)}, {"decisions", std::move(decisions)}, {"warnings", l.warnings}};
}

store::ArtifactSet funnel_artifacts(const FunnelLedger& ledger, std::string_view prefix) {
    store::ArtifactSet out;
    const std::string p(prefix);
    out[p + "ledger.json"] = to_json(ledger).dump(2) + "\n";
    for (const auto& d : ledger.decisions) {
        if (d.passed) continue;
        json j{{"candidate_id", d.candidate_id},
               {"tier", d.tier},
               {"tier_name", TierId(d.tier).name()},
               {"feedback", d.feedback},
               {"flags", d.flags}};
        out[p + "feedback/" + text::safe_component(d.candidate_id) + ".json"] = j.dump(2) + "\n";
    }
    return out;
}

std::vector<std::string> load_feedback_notes(const std::filesystem::path& feedback_dir, std::size_t max_notes) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(feedback_dir)) {
        throw Error(ErrorCode::Io, "feedback directory not found: " + feedback_dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(feedback_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::string> notes;
    for (const auto& f : files) {
        if (notes.size() >= max_notes) break;
        std::ifstream in(f, std::ios::binary);
        const json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("feedback")) {
            throw Error(ErrorCode::InvalidArgument, "malformed feedback file " + f.string());
        }
        notes.push_back("A prior candidate (" + j.value("candidate_id", f.stem().string()) + ") failed tier " +
                        std::to_string(j.value("tier", 0)) + " (" + j.value("tier_name", std::string("?")) +
                        "): " + j.at("feedback").get<std::string>());
    }
    return notes;
}

}  // namespace gauntlet::funnel
