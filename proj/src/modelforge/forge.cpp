#include "gauntlet/modelforge/forge.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/util/parallel.hpp"
#include "gauntlet/util/text.hpp"

namespace gauntlet::modelforge {

using backend::AgentRequest;
using backend::ask_structured;
using backend::ParseError;

namespace {

AgentRequest make(std::string role, std::string system, std::string user, double temperature, std::string tag) {
    AgentRequest r;
    r.role_name = std::move(role);
    r.system_prompt = std::move(system);
    r.user_prompt = std::move(user);
    r.temperature = Temperature{temperature};
    r.request_tag = std::move(tag);
    r.max_output = 8192;
    return r;
}

const std::set<std::string>& math_names() {
    static const std::set<std::string> names = {"min",  "max",  "log",   "log2", "log10", "ln",  "exp", "sqrt",
                                                "ceil", "floor", "abs",  "pow",  "sum",   "mean", "avg", "round",
                                                "sin",  "cos",   "tanh", "pi",   "e",     "inf"};
    return names;
}

std::string paper_block(std::string_view paper_text) {
    return "[DOCUMENT]\n" + std::string(paper_text) + "\n[END DOCUMENT]\n";
}

constexpr std::string_view kSpecFormat =
    "Reply with one JSON object inside a ```json fence, with keys:\n"
    "- variables: [{\"symbol\", \"meaning\", \"units\"}]\n"
    "- relationships: [equation strings that use only declared symbols]\n"
    "- constraints: [strings]\n"
    "- calibration_data: [{\"source\": citation, \"values\": object}]\n";

constexpr std::string_view kVerifierFormat =
    "Reply with:\nAPPROVED: YES or NO\nISSUES:\n- <one issue per bullet, or none>\n";

ModelSpec parse_spec(std::string_view reply, const std::string& paper_id) {
    std::string body;
    if (auto fenced = text::fenced_block(reply)) body = *fenced;
    else body = text::trim(reply);
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError("specification is not a JSON object in a ```json fence");
    ModelSpec spec;
    try {
        spec = model_spec_from_json(j, paper_id);
    } catch (const Error& e) {
        throw ParseError(e.detail());
    }
    if (spec.variables.empty()) throw ParseError("specification declares no variables");
    if (spec.relationships.empty()) throw ParseError("specification has no relationships");
    return spec;
}

std::string parse_program(std::string_view reply) {
    auto code = text::fenced_block(reply);
    if (!code || text::trim(*code).empty()) throw ParseError("no fenced code block with the program");
    return *code;
}

Interpretation parse_interpretation(std::string_view reply) {
    const auto sections = text::parse_sections(reply);
    auto need = [&](std::string_view heading) {
        const auto* s = text::find_section(sections, heading);
        if (!s || s->body.empty()) throw ParseError("missing or empty '## " + std::string(heading) + "' section");
        return s->body;
    };
    Interpretation i;
    i.model_structure = need("Model Structure");
    i.assumptions = need("Assumptions");
    i.findings = need("Findings");
    i.magic_gaps = need("Magic Gaps");
    i.full_text = text::trim(reply);
    i.infeasible = text::contains_ci(i.magic_gaps, "INFEASIBLE");
    return i;
}

std::vector<RubricScore> parse_selector(std::string_view reply, const std::vector<std::size_t>& eligible,
                                        std::string* justification) {
    std::vector<RubricScore> out;
    for (auto k : eligible) {
        const std::regex re("RUN\\s*" + std::to_string(k) +
                                "\\s*:[^\\n]*?CORRECTNESS\\s*=\\s*(\\d+)[^\\n]*?INSIGHT\\s*=\\s*(\\d+)",
                            std::regex::icase);
        std::cmatch m;
        const std::string s(reply);
        if (!std::regex_search(s.c_str(), m, re)) {
            throw ParseError("missing line 'RUN " + std::to_string(k) + ": CORRECTNESS=<0-10> INSIGHT=<0-10>'");
        }
        RubricScore r;
        r.run_index = k;
        r.correctness = std::stoi(m[1].str());
        r.insight = std::stoi(m[2].str());
        if (r.correctness > 10 || r.insight > 10) throw ParseError("rubric scores must lie in 0-10");
        r.eligible = true;
        out.push_back(r);
    }
    const auto v = text::parse_labeled(reply, {"JUSTIFICATION"});
    *justification = v[0].value_or("");
    return out;
}

}  // namespace

std::vector<std::string> ModelSpec::undeclared_references() const {
    std::set<std::string> declared;
    for (const auto& v : variables) declared.insert(v.symbol);
    std::vector<std::string> issues;
    std::set<std::string> reported;
    static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
    for (const auto& rel : relationships) {
        for (auto it = std::sregex_iterator(rel.begin(), rel.end(), ident); it != std::sregex_iterator(); ++it) {
            const auto pos = static_cast<std::size_t>(it->position());
            // Skip the exponent part of numerals such as 1e9.
            if (pos > 0 && std::isdigit(static_cast<unsigned char>(rel[pos - 1]))) continue;
            const std::string name = it->str();
            if (declared.count(name) || math_names().count(text::to_lower(name))) continue;
            if (reported.insert(name).second) {
                issues.push_back("relationship '" + rel + "' references undeclared symbol '" + name + "'");
            }
        }
    }
    return issues;
}

json to_json(const ModelSpec& s) {
    json vars = json::array();
    for (const auto& v : s.variables) vars.push_back(json{{"symbol", v.symbol}, {"meaning", v.meaning}, {"units", v.units}});
    json cal = json::array();
    for (const auto& c : s.calibration_data) cal.push_back(json{{"source", c.source}, {"values", c.values}});
    return json{{"paper_id", s.paper_id},
                {"variables", std::move(vars)},
                {"relationships", s.relationships},
                {"constraints", s.constraints},
                {"calibration_data", std::move(cal)}};
}

ModelSpec model_spec_from_json(const json& j, std::string paper_id) {
    require_known_keys(j, {"paper_id", "variables", "relationships", "constraints", "calibration_data"}, "model spec");
    ModelSpec s;
    s.paper_id = std::move(paper_id);
    try {
        for (const auto& v : j.value("variables", json::array())) {
            require_known_keys(v, {"symbol", "meaning", "units"}, "variable");
            s.variables.push_back({v.at("symbol").get<std::string>(), v.value("meaning", std::string{}),
                                   v.value("units", std::string{})});
        }
        s.relationships = j.value("relationships", std::vector<std::string>{});
        s.constraints = j.value("constraints", std::vector<std::string>{});
        for (const auto& c : j.value("calibration_data", json::array())) {
            require_known_keys(c, {"source", "values"}, "calibration entry");
            s.calibration_data.push_back({c.at("source").get<std::string>(), c.value("values", json::object())});
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed model spec: ") + e.what());
    }
    return s;
}

std::string_view to_string(VerifierId v) noexcept {
    switch (v) {
        case VerifierId::Spec: return "spec";
        case VerifierId::Functional: return "functional";
        case VerifierId::Directive: return "directive";
    }
    return "?";
}

json to_json(const VerifierReport& r) {
    return json{{"verifier_id", to_string(r.verifier)}, {"approved", r.approved}, {"issues", r.issues}};
}

VerifierReport parse_verifier_reply(VerifierId id, std::string_view reply) {
    VerifierReport r;
    r.verifier = id;
    const auto v = text::parse_labeled(reply, {"APPROVED", "ISSUES"});
    std::optional<std::size_t> k;
    if (v[0]) k = text::first_keyword(*v[0], {"YES", "NO"});
    if (v[1]) {
        for (auto& item : text::parse_bullets(*v[1])) {
            const auto low = text::to_lower(text::trim(item));
            if (low == "none" || low == "none." || low == "n/a" || low.empty()) continue;
            r.issues.push_back(text::trim(item));
        }
    }
    if (!k) {
        r.issues.insert(r.issues.begin(), "verifier reply unparseable: expected 'APPROVED: YES' or 'APPROVED: NO'");
        return r;
    }
    if (*k == 1 && r.issues.empty()) r.issues.push_back("rejected without a stated issue");
    r.approved = *k == 0 && r.issues.empty();
    return r;
}

std::vector<std::string> scan_program(std::string_view program) {
    static const std::pair<const char*, const char*> patterns[] = {
        {"open(", "opens a file"},
        {"socket", "uses sockets"},
        {"urllib", "imports urllib"},
        {"requests", "mentions the requests library"},
        {"http", "mentions http"},
        {"subprocess", "spawns subprocesses"},
        {"os.system", "runs shell commands"},
        {"fopen", "opens a file"},
        {"ifstream", "opens a file"},
        {"ofstream", "opens a file"},
    };
    std::vector<std::string> out;
    for (const auto& [needle, what] : patterns) {
        if (program.find(needle) != std::string_view::npos) out.push_back(std::string(what) + " ('" + needle + "')");
    }
    return out;
}

json to_json(const Interpretation& i) {
    return json{{"model_structure", i.model_structure}, {"assumptions", i.assumptions}, {"findings", i.findings},
                {"magic_gaps", i.magic_gaps},           {"infeasible", i.infeasible},   {"full_text", i.full_text}};
}

std::string_view to_string(RunState s) noexcept {
    switch (s) {
        case RunState::Complete: return "complete";
        case RunState::HaltedUnapproved: return "halted-unapproved";
        case RunState::Failed: return "failed";
    }
    return "?";
}

LoopCounts ForgeRun::loop_counts() const noexcept {
    return {phase1 ? phase1->loop_count : 0, phase2 ? phase2->loop_count : 0};
}

std::optional<std::size_t> choose_run(const std::vector<RubricScore>& scores) {
    std::optional<std::size_t> best;
    int best_score = -1;
    std::size_t best_index = 0;
    for (const auto& s : scores) {
        if (!s.eligible) continue;
        const int c = s.combined();
        if (c > best_score || (c == best_score && s.run_index < best_index)) {
            best_score = c;
            best_index = s.run_index;
            best = s.run_index;
        }
    }
    return best;
}

std::string run_tag(std::string_view paper_id, std::size_t run_index) {
    return "forge/" + std::string(paper_id) + "/run-" + std::to_string(run_index);
}

Phase1Result phase1_specify(std::string_view paper_id, std::string_view paper_text, AgentClient& client,
                            const std::string& tag_prefix) {
    if (text::trim(paper_text).empty()) throw Error(ErrorCode::InvalidArgument, "forge input text is empty");
    const std::string pid(paper_id);
    auto parse = [&pid](std::string_view r) { return parse_spec(r, pid); };

    std::string user = paper_block(paper_text) +
                       "\nExtract every mathematical relationship, variable, constraint and calibration datum the "
                       "document relies on to make its performance claims.\n";
    user += kSpecFormat;
    Phase1Result out;
    out.spec = ask_structured(
        client,
        make("spec-extractor", "You turn architecture papers into first-principles performance model specifications.",
             std::move(user), 0.3, tag_prefix + "/spec"),
        parse, ErrorCode::Phase1Failed);

    for (int round = 1; round <= kMaxLoops; ++round) {
        std::string audit = "[AUDIT ROUND " + std::to_string(round) + " OF " + std::to_string(kMaxLoops) + "]\n" +
                            paper_block(paper_text) + "\n[SPECIFICATION]\n" + to_json(out.spec).dump(2) +
                            "\n\nAudit the specification for completeness, missing variables and formulas that the "
                            "document does not support.\n";
        audit += kVerifierFormat;
        const auto reply = client.complete(make("spec-verifier",
                                                "You audit performance model specifications against their source "
                                                "document.",
                                                std::move(audit), 0.0, tag_prefix + "/spec-verify-" + std::to_string(round)));
        auto report = parse_verifier_reply(VerifierId::Spec, reply.text);
        for (auto& issue : out.spec.undeclared_references()) report.issues.push_back(std::move(issue));
        report.approved = report.approved && report.issues.empty();
        out.loop_count = round;
        out.reports.push_back(report);
        if (report.approved) {
            out.approved = true;
            break;
        }
        if (round == kMaxLoops) break;
        std::string fix = paper_block(paper_text) + "\n[SPECIFICATION]\n" + to_json(out.spec).dump(2) + "\n\n[ISSUES]\n";
        for (const auto& i : report.issues) fix += "- " + i + "\n";
        fix += "\nFix every issue and return the complete corrected specification.\n";
        fix += kSpecFormat;
        out.spec = ask_structured(
            client,
            make("spec-repairer", "You repair performance model specifications.", std::move(fix), 0.3,
                 tag_prefix + "/spec-repair-" + std::to_string(round)),
            parse, ErrorCode::Phase1Failed);
    }
    return out;
}

Phase2Result phase2_implement(const ModelSpec& spec, AgentClient& client, Sandbox& sandbox,
                              const std::filesystem::path& work_dir, const std::string& tag_prefix) {
    const std::string spec_text = to_json(spec).dump(2);
    std::string user = "[SPECIFICATION]\n" + spec_text +
                       "\n\nImplement this specification as one self-contained executable model. It must not read "
                       "files or use the network; every constant comes from the specification. Print each result "
                       "on its own line as name=value.\nReply with the program in a single fenced code block.\n";
    Phase2Result out;
    std::string program = ask_structured(
        client,
        make("model-implementer", "You write small, self-contained first-principles performance models.",
             std::move(user), 0.3, tag_prefix + "/implement"),
        parse_program, ErrorCode::Phase2Failed);

    for (int round = 1; round <= kMaxLoops; ++round) {
        Phase2Iteration it;
        try {
            it.execution = sandbox.run(program, work_dir);
        } catch (const Error& e) {
            it.execution = ExecutionReport{};
            it.execution.stderr_text = e.what();
            it.execution.isolation = "none";
        }
        const std::string shared = "[SPECIFICATION]\n" + spec_text + "\n\n[PROGRAM]\n```\n" + program +
                                   "\n```\n\n[EXECUTION LOG]\n" + it.execution.log() + "\n";
        std::string functional = shared +
                                 "Check that the program implements every relationship of the specification and that "
                                 "its output is plausible.\n";
        functional += kVerifierFormat;
        std::string directive = shared +
                                "Enforce scientific standards: no hardcoded magic numbers (every constant traces to "
                                "the specification's calibration data), consistent units, stated assumptions.\n";
        directive += kVerifierFormat;
        const std::string suffix = "-" + std::to_string(round);
        // Both verifiers are issued before either reply is read.
        const auto replies = client.complete_all(
            {make("functional-verifier", "You verify that a performance model program matches its specification.",
                  std::move(functional), 0.0, tag_prefix + "/verify-functional" + suffix),
             make("directive-verifier", "You enforce scientific modelling standards on performance model programs.",
                  std::move(directive), 0.0, tag_prefix + "/verify-directive" + suffix)});
        it.functional = parse_verifier_reply(VerifierId::Functional, replies[0].text);
        it.directive = parse_verifier_reply(VerifierId::Directive, replies[1].text);
        if (!it.execution.success()) {
            it.functional.approved = false;
            it.functional.issues.insert(it.functional.issues.begin(),
                                        "execution failed: " + it.execution.failure_reason());
        }
        out.loop_count = round;
        const bool approved = it.functional.approved && it.directive.approved;
        out.iterations.push_back(it);
        out.artifact.program_text = program;
        out.artifact.execution = it.execution;
        if (approved) {
            out.approved = true;
            break;
        }
        if (round == kMaxLoops) break;
        std::string fix = shared + "[ISSUES]\n";
        for (const auto& i : it.functional.issues) fix += "- functional: " + i + "\n";
        for (const auto& i : it.directive.issues) fix += "- directive: " + i + "\n";
        fix += "\nFix every issue and reply with the complete corrected program in a single fenced code block.\n";
        program = ask_structured(client,
                                 make("model-repairer", "You repair performance model programs.", std::move(fix), 0.3,
                                      tag_prefix + "/implement-repair" + suffix),
                                 parse_program, ErrorCode::Phase2Failed);
    }
    out.artifact.spec_id = spec.paper_id;
    out.artifact.advisories = scan_program(out.artifact.program_text);
    return out;
}

Interpretation phase3_interpret(const ModelArtifact& artifact, const ModelSpec& spec, std::string_view paper_text,
                                AgentClient& client, const std::string& tag_prefix) {
    if (!artifact.execution.success()) {
        throw Error(ErrorCode::Precondition, "cannot interpret a model that did not execute successfully");
    }
    std::string user = paper_block(paper_text) + "\n[SPECIFICATION]\n" + to_json(spec).dump(2) +
                       "\n\n[MODEL OUTPUT]\n" + artifact.execution.stdout_text +
                       "\n\nInterpret the model against the document's claims. Use these headings:\n"
                       "## Model Structure\n## Assumptions\n## Findings\n## Magic Gaps\n"
                       "Under Magic Gaps list every place where the claimed performance exceeds what the model "
                       "predicts, or write 'none identified'. Write INFEASIBLE there if the claim cannot hold.\n";
    return ask_structured(client,
                          make("interpreter", "You interpret first-principles performance models.", std::move(user),
                               0.3, tag_prefix + "/interpret"),
                          parse_interpretation, ErrorCode::Phase3Failed);
}

ForgeRun run_single(std::string_view paper_id, std::string_view paper_text, std::size_t run_index,
                    AgentClient& client, Sandbox& sandbox, const std::filesystem::path& work_root,
                    const ForgeConfig& config) {
    ForgeRun run;
    run.run_index = run_index;
    const std::string tag = run_tag(paper_id, run_index);
    try {
        run.phase1 = phase1_specify(paper_id, paper_text, client, tag);
        if (!run.phase1->approved && !config.continue_unapproved) {
            run.state = RunState::HaltedUnapproved;
            run.error = "specification unapproved after " + std::to_string(run.phase1->loop_count) + " audits";
            return run;
        }
        run.phase2 = phase2_implement(run.phase1->spec, client, sandbox,
                                      work_root / ("run-" + std::to_string(run_index)) / "sandbox", tag);
        if (!run.phase2->artifact.execution.success()) {
            run.state = RunState::Failed;
            run.error = "model did not execute: " + run.phase2->artifact.execution.failure_reason();
            return run;
        }
        if (!run.phase2->approved && !config.continue_unapproved) {
            run.state = RunState::HaltedUnapproved;
            run.error = "model unapproved after " + std::to_string(run.phase2->loop_count) + " verification rounds";
            return run;
        }
        run.interpretation = phase3_interpret(run.phase2->artifact, run.phase1->spec, paper_text, client, tag);
        run.state = RunState::Complete;
    } catch (const Error& e) {
        run.state = RunState::Failed;
        run.error = e.what();
    }
    return run;
}

ForgeResult run_forge(std::string_view paper_id, std::string_view paper_text, AgentClient& client, Sandbox& sandbox,
                      const std::filesystem::path& work_root, const ForgeConfig& config) {
    if (config.runs == 0) throw Error(ErrorCode::InvalidArgument, "forge needs at least one run");
    if (text::trim(paper_text).empty()) throw Error(ErrorCode::InvalidArgument, "forge input text is empty");
    ForgeResult result;
    result.paper_id = std::string(paper_id);
    result.runs = parallel_map(config.runs, config.concurrent_runs ? config.runs : 1, [&](std::size_t i) {
        return run_single(paper_id, paper_text, i + 1, client, sandbox, work_root, config);
    });

    std::vector<std::size_t> eligible;
    for (const auto& r : result.runs) {
        if (r.succeeded()) eligible.push_back(r.run_index);
    }
    for (const auto& r : result.runs) result.pick.rubric_scores.push_back({r.run_index, 0, 0, false});

    if (eligible.empty()) {
        std::string causes;
        for (const auto& r : result.runs) causes += "\n  run-" + std::to_string(r.run_index) + ": " + r.error;
        result.pick.justification = "none: every run failed";
        throw ForgeFailedError("all " + std::to_string(config.runs) + " forge runs failed:" + causes, std::move(result));
    }

    std::string user = "Score each run on correctness (does the model faithfully capture the document) and insight "
                       "(does the interpretation teach something), each from 0 to 10.\n\n";
    for (auto k : eligible) {
        const auto& r = result.runs[k - 1];
        user += "[RUN " + std::to_string(k) + "]\n[SPECIFICATION]\n" + to_json(r.phase1->spec).dump(2) +
                "\n[MODEL OUTPUT]\n" + r.phase2->artifact.execution.stdout_text + "\n[INTERPRETATION]\n" +
                r.interpretation->full_text + "\n[END RUN " + std::to_string(k) + "]\n\n";
    }
    user += "Reply with one line per run:\nRUN <k>: CORRECTNESS=<0-10> INSIGHT=<0-10>\nthen\nJUSTIFICATION: <why>\n";
    std::string justification;
    try {
        const auto scores = ask_structured(
            client,
            make("selector", "You select the best of several independent performance-model runs.", std::move(user),
                 0.0, "forge/" + std::string(paper_id) + "/select"),
            [&](std::string_view r) { return parse_selector(r, eligible, &justification); }, ErrorCode::ForgeFailed);
        for (const auto& s : scores) result.pick.rubric_scores[s.run_index - 1] = s;
        result.pick.justification = justification;
    } catch (const Error& e) {
        for (auto k : eligible) result.pick.rubric_scores[k - 1].eligible = true;
        result.pick.justification = "selector unavailable; lowest successful run chosen";
        result.warnings.push_back(std::string("selector failed: ") + e.what());
    }
    result.pick.chosen_run_index = choose_run(result.pick.rubric_scores);
    return result;
}

json to_json(const ForgeRun& r) {
    const auto loops = r.loop_counts();
    json j{{"run_index", r.run_index},
           {"state", to_string(r.state)},
           {"loop_counts", json{{"phase1", loops.phase1}, {"phase2", loops.phase2}}}};
    if (!r.error.empty()) j["error"] = r.error;
    if (r.phase1) {
        json reports = json::array();
        for (const auto& rep : r.phase1->reports) reports.push_back(to_json(rep));
        j["phase1"] = json{{"spec", to_json(r.phase1->spec)}, {"approved", r.phase1->approved}, {"reports", reports}};
    }
    if (r.phase2) {
        json iters = json::array();
        for (const auto& it : r.phase2->iterations) {
            iters.push_back(json{{"execution", to_json(it.execution)},
                                 {"functional", to_json(it.functional)},
                                 {"directive", to_json(it.directive)}});
        }
        j["phase2"] = json{{"approved", r.phase2->approved},
                           {"program", r.phase2->artifact.program_text},
                           {"advisories", r.phase2->artifact.advisories},
                           {"execution", to_json(r.phase2->artifact.execution)},
                           {"iterations", std::move(iters)}};
    }
    if (r.interpretation) j["interpretation"] = to_json(*r.interpretation);
    return j;
}

json to_json(const ForgeResult& r) {
    json runs = json::array();
    for (const auto& run : r.runs) runs.push_back(to_json(run));
    json scores = json::array();
    for (const auto& s : r.pick.rubric_scores) {
        scores.push_back(json{{"run_index", s.run_index},
                              {"correctness", s.correctness},
                              {"insight", s.insight},
                              {"eligible", s.eligible},
                              {"combined", s.combined()}});
    }
    return json{{"paper_id", r.paper_id},
                {"runs", std::move(runs)},
                {"pick",
                 json{{"chosen_run_index", r.pick.chosen_run_index ? json(*r.pick.chosen_run_index) : json("none")},
                      {"rubric_scores", std::move(scores)},
                      {"justification", r.pick.justification}}},
                {"warnings", r.warnings}};
}

store::ArtifactSet forge_artifacts(const ForgeResult& result) {
    store::ArtifactSet out;
    const json full = to_json(result);
    for (const auto& r : result.runs) {
        const std::string dir = "forge/run-" + std::to_string(r.run_index) + "/";
        json verifiers{{"phase1", json::array()}, {"phase2", json::array()}};
        if (r.phase1) {
            json spec = to_json(r.phase1->spec);
            spec["approved"] = r.phase1->approved;
            spec["loop_count"] = r.phase1->loop_count;
            out[dir + "spec.json"] = spec.dump(2) + "\n";
            for (const auto& rep : r.phase1->reports) verifiers["phase1"].push_back(to_json(rep));
        }
        if (r.phase2) {
            out[dir + "model.src"] = r.phase2->artifact.program_text;
            out[dir + "execution.log"] = r.phase2->artifact.execution.log();
            for (const auto& it : r.phase2->iterations) {
                verifiers["phase2"].push_back(json{{"functional", to_json(it.functional)},
                                                   {"directive", to_json(it.directive)},
                                                   {"execution_success", it.execution.success()}});
            }
        }
        out[dir + "verifiers.json"] = verifiers.dump(2) + "\n";
        if (r.interpretation) out[dir + "interpretation.md"] = r.interpretation->full_text + "\n";
    }
    out["forge/pick.json"] = full["pick"].dump(2) + "\n";
    return out;
}

}  // namespace gauntlet::modelforge
