#include <gtest/gtest.h>

#include <atomic>

#include "gauntlet/modelforge/forge.hpp"
#include "support.hpp"

using namespace gauntlet;
using namespace gauntlet::modelforge;
namespace fx = gauntlet::fixture;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSpec =
    "```json\n{\"variables\": [{\"symbol\": \"h\", \"meaning\": \"hit rate\", \"units\": \"\"},"
    "{\"symbol\": \"L\", \"meaning\": \"miss penalty\", \"units\": \"cycles\"},"
    "{\"symbol\": \"T\", \"meaning\": \"time\", \"units\": \"cycles\"}],"
    "\"relationships\": [\"T = 1 + (1 - h) * L\"], \"constraints\": [],"
    "\"calibration_data\": [{\"source\": \"table 2\", \"values\": {\"h\": 0.9, \"L\": 200}}]}\n```\n";
constexpr const char* kProgram = "```python\nprint('t=21')\n```\n";
constexpr const char* kYes = "APPROVED: YES\nISSUES:\n- none\n";
constexpr const char* kNo = "APPROVED: NO\nISSUES:\n- missing the queueing term\n";
constexpr const char* kInterp =
    "## Model Structure\nAMAT.\n## Assumptions\nIndependent misses.\n## Findings\n21 cycles.\n"
    "## Magic Gaps\nnone identified\n";
constexpr const char* kPaper = "Our cache reaches a 90% hit rate with a 200-cycle miss penalty.";

std::vector<backend::MockRule> rules() {
    return {fx::rule("spec-extractor", kSpec),
            fx::rule("spec-repairer", kSpec),
            fx::rule("spec-verifier", kYes),
            fx::rule("model-implementer", kProgram),
            fx::rule("model-repairer", kProgram),
            fx::rule("functional-verifier", kYes),
            fx::rule("directive-verifier", kYes),
            fx::rule("interpreter", kInterp),
            fx::rule("selector", "RUN 1: CORRECTNESS=5 INSIGHT=5\nRUN 2: CORRECTNESS=9 INSIGHT=8\n"
                                 "RUN 3: CORRECTNESS=9 INSIGHT=8\nJUSTIFICATION: run 2 is clearest\n")};
}

std::vector<backend::MockRule> front(backend::MockRule r, std::vector<backend::MockRule> rest = rules()) {
    rest.insert(rest.begin(), std::move(r));
    return rest;
}

ExecutionReport ok_exec(std::string out = "t=21\n") {
    ExecutionReport r;
    r.exit_code = 0;
    r.stdout_text = std::move(out);
    r.isolation = "fake";
    return r;
}

FunctionSandbox fake_sandbox() {
    return FunctionSandbox([](const std::string&, const fs::path&) { return ok_exec(); });
}

ProcessSandbox python_sandbox(std::chrono::milliseconds wall = std::chrono::seconds(20)) {
    ProcessSandboxConfig cfg;
    cfg.limits.wall_clock = wall;
    cfg.limits.memory_bytes = std::size_t{512} << 20;
    cfg.limits.max_output_bytes = 4096;
    return ProcessSandbox(cfg);
}

}  // namespace

TEST(VerifierReply, ParsingRules) {
    EXPECT_TRUE(parse_verifier_reply(VerifierId::Spec, kYes).approved);
    const auto no = parse_verifier_reply(VerifierId::Spec, kNo);
    EXPECT_FALSE(no.approved);
    EXPECT_EQ(no.issues, (std::vector<std::string>{"missing the queueing term"}));
    EXPECT_FALSE(parse_verifier_reply(VerifierId::Spec, "APPROVED: YES\nISSUES:\n- a real issue\n").approved);
    const auto junk = parse_verifier_reply(VerifierId::Directive, "looks fine to me");
    EXPECT_FALSE(junk.approved);
    ASSERT_EQ(junk.issues.size(), 1u);
    EXPECT_FALSE(parse_verifier_reply(VerifierId::Spec, "APPROVED: NO\n").issues.empty());
}

TEST(Spec, UndeclaredReferences) {
    ModelSpec s;
    s.variables = {{"a", "", ""}, {"b", "", ""}};
    s.relationships = {"a = 2 * b + sqrt(c) + 1e9", "b = max(a, d)"};
    const auto issues = s.undeclared_references();
    ASSERT_EQ(issues.size(), 2u);
    EXPECT_NE(issues[0].find("'c'"), std::string::npos);
    EXPECT_NE(issues[1].find("'d'"), std::string::npos);
}

TEST(Selector, ChooseRunTiesToLowestIndex) {
    EXPECT_EQ(choose_run({{1, 5, 5, true}, {2, 9, 8, true}, {3, 9, 8, true}}), std::optional<std::size_t>(2));
    EXPECT_EQ(choose_run({{1, 10, 10, false}, {2, 0, 0, true}}), std::optional<std::size_t>(2));
    EXPECT_EQ(choose_run({{1, 10, 10, false}}), std::nullopt);
}

TEST(Selector, PropertyPickIsMaximalEligible) {
    fx::Gen g(31);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<RubricScore> s;
        for (std::size_t k = 1; k <= g.size(1, 8); ++k) {
            s.push_back({k, g.integer(0, 10), g.integer(0, 10), g.coin(0.7)});
        }
        const auto pick = choose_run(s);
        const bool any = std::any_of(s.begin(), s.end(), [](const RubricScore& r) { return r.eligible; });
        ASSERT_EQ(pick.has_value(), any);
        if (!pick) continue;
        const auto& chosen = s[*pick - 1];
        ASSERT_TRUE(chosen.eligible);
        for (const auto& r : s) {
            if (!r.eligible) continue;
            ASSERT_LE(r.combined(), chosen.combined());
            if (r.combined() == chosen.combined()) {
                ASSERT_GE(r.run_index, chosen.run_index);
            }
        }
    }
}

TEST(Phase1, ApprovedFirstRound) {
    auto client = fx::make_client(backend::mock_script(rules()));
    const auto p1 = phase1_specify("p", kPaper, *client, "forge/p/run-1");
    EXPECT_TRUE(p1.approved);
    EXPECT_EQ(p1.loop_count, 1);
    EXPECT_EQ(p1.spec.variables.size(), 3u);
}

TEST(Phase1, NeverApprovedStopsAtThreeLoops) {
    auto rec = std::make_shared<fx::RecordingBackend>(backend::mock_script(front(fx::rule("spec-verifier", kNo))));
    auto client = fx::make_client(rec);
    const auto p1 = phase1_specify("p", kPaper, *client, "forge/p/run-1");
    EXPECT_FALSE(p1.approved);
    EXPECT_EQ(p1.loop_count, kMaxLoops);
    EXPECT_EQ(p1.reports.size(), 3u);
    std::size_t verifies = 0, repairs = 0;
    for (const auto& r : rec->requests()) {
        verifies += r.role_name == "spec-verifier";
        repairs += r.role_name == "spec-repairer";
    }
    EXPECT_EQ(verifies, 3u);
    EXPECT_EQ(repairs, 2u);
}

TEST(Phase1, UndeclaredSymbolBlocksApproval) {
    const std::string bad =
        "```json\n{\"variables\": [{\"symbol\": \"T\"}], \"relationships\": [\"T = x + 1\"]}\n```\n";
    auto client = fx::make_client(backend::mock_script(front(fx::rule("spec-extractor", bad))));
    const auto p1 = phase1_specify("p", kPaper, *client, "forge/p/run-1");
    EXPECT_EQ(p1.loop_count, 2);  // the repairer returns a clean spec
    EXPECT_TRUE(p1.approved);
    EXPECT_FALSE(p1.reports[0].approved);
}

TEST(Phase2, VerifiersIssuedTogetherEachRound) {
    auto transcript = std::make_shared<backend::Transcript>();
    backend::AgentClient client(backend::mock_script(front(fx::rule("directive-verifier", kNo))), transcript, 4);
    auto sb = fake_sandbox();
    fx::TempDir dir;
    const auto p1 = phase1_specify("p", kPaper, client, "t");
    const auto p2 = phase2_implement(p1.spec, client, sb, dir.path(), "t");
    EXPECT_FALSE(p2.approved);
    EXPECT_EQ(p2.loop_count, kMaxLoops);
    EXPECT_EQ(p2.iterations.size(), 3u);
    for (int round = 1; round <= 3; ++round) {
        const backend::TranscriptEntry *f = nullptr, *d = nullptr;
        const auto entries = transcript->entries();
        for (const auto& e : entries) {
            if (e.request.request_tag == "t/verify-functional-" + std::to_string(round)) f = &e;
            if (e.request.request_tag == "t/verify-directive-" + std::to_string(round)) d = &e;
        }
        ASSERT_TRUE(f && d) << round;
        EXPECT_LT(f->issued_seq, d->completed_seq);
        EXPECT_LT(d->issued_seq, f->completed_seq);
    }
}

TEST(Phase2, ExecutionFailureIsAFunctionalIssue) {
    auto client = fx::make_client(backend::mock_script(rules()));
    FunctionSandbox crash([](const std::string&, const fs::path&) {
        ExecutionReport r;
        r.exit_code = 1;
        r.stderr_text = "Traceback";
        return r;
    });
    fx::TempDir dir;
    const auto p1 = phase1_specify("p", kPaper, *client, "t");
    const auto p2 = phase2_implement(p1.spec, *client, crash, dir.path(), "t");
    EXPECT_FALSE(p2.approved);
    EXPECT_NE(p2.iterations[0].functional.issues[0].find("execution failed"), std::string::npos);
}

TEST(Forge, ThreeRunsAndSelectorPick) {
    auto client = fx::make_client(backend::mock_script(rules()));
    auto sb = fake_sandbox();
    fx::TempDir dir;
    const auto r = run_forge("p", kPaper, *client, sb, dir.path());
    ASSERT_EQ(r.runs.size(), 3u);
    for (const auto& run : r.runs) EXPECT_TRUE(run.succeeded()) << run.error;
    EXPECT_EQ(r.pick.chosen_run_index, std::optional<std::size_t>(2));
    EXPECT_EQ(r.pick.justification, "run 2 is clearest");
    const auto art = forge_artifacts(r);
    for (const char* f : {"forge/run-1/spec.json", "forge/run-1/model.src", "forge/run-1/execution.log",
                          "forge/run-1/verifiers.json", "forge/run-1/interpretation.md", "forge/pick.json"}) {
        EXPECT_TRUE(art.count(f)) << f;
    }
}

TEST(Forge, FailedRunsAreIneligible) {
    auto rules2 = front(fx::rule("spec-extractor", "no json here", "", "run-2/"));
    auto client = fx::make_client(backend::mock_script(rules2));
    auto sb = fake_sandbox();
    fx::TempDir dir;
    const auto r = run_forge("p", kPaper, *client, sb, dir.path());
    EXPECT_EQ(r.runs[1].state, RunState::Failed);
    EXPECT_FALSE(r.pick.rubric_scores[1].eligible);
    EXPECT_EQ(r.pick.chosen_run_index, std::optional<std::size_t>(3));
}

TEST(Forge, AllRunsFailedRaisesWithResult) {
    auto client = fx::make_client(backend::mock_script(front(fx::rule("spec-extractor", "nothing"))));
    auto sb = fake_sandbox();
    fx::TempDir dir;
    try {
        run_forge("p", kPaper, *client, sb, dir.path());
        FAIL();
    } catch (const ForgeFailedError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ForgeFailed);
        EXPECT_EQ(e.result().runs.size(), 3u);
        EXPECT_FALSE(e.result().pick.chosen_run_index);
    }
}

TEST(Forge, UnapprovedHaltsUnlessContinuing) {
    auto client = fx::make_client(backend::mock_script(front(fx::rule("spec-verifier", kNo))));
    auto sb = fake_sandbox();
    fx::TempDir dir;
    EXPECT_THROW(run_forge("p", kPaper, *client, sb, dir.path()), ForgeFailedError);
    ForgeConfig cfg;
    cfg.continue_unapproved = true;
    const auto r = run_forge("p", kPaper, *client, sb, dir.path(), cfg);
    EXPECT_TRUE(r.pick.chosen_run_index);
}

TEST(Forge, PropertyLoopCountsBounded) {
    fx::Gen g(41);
    for (int trial = 0; trial < 40; ++trial) {
        auto r = rules();
        for (const char* role : {"spec-verifier", "functional-verifier", "directive-verifier"}) {
            r.insert(r.begin(), fx::rule(role, g.coin(0.6) ? kNo : "{{pick:APPROVED: YES|APPROVED: NO\nISSUES:\n- x}}"));
        }
        auto client = fx::make_client(backend::mock_script(r, static_cast<std::uint64_t>(trial)));
        std::atomic<int> execs{0};
        FunctionSandbox sb([&](const std::string&, const fs::path&) {
            ++execs;
            return ok_exec();
        });
        ForgeConfig cfg;
        cfg.continue_unapproved = g.coin();
        fx::TempDir dir;
        ForgeResult res;
        try {
            res = run_forge("p", kPaper, *client, sb, dir.path(), cfg);
        } catch (const ForgeFailedError& e) {
            res = e.result();
        }
        for (const auto& run : res.runs) {
            const auto l = run.loop_counts();
            ASSERT_LE(l.phase1, kMaxLoops);
            ASSERT_LE(l.phase2, kMaxLoops);
            ASSERT_GE(l.phase1, 1);
        }
        ASSERT_LE(execs.load(), 3 * kMaxLoops);
    }
}

TEST(Sandbox, RunsPythonAndCapturesOutput) {
    auto sb = python_sandbox();
    sb.preflight();
    fx::TempDir dir;
    const auto r = sb.run("print('amat=21')\n", dir.path());
    ASSERT_TRUE(r.success()) << r.log();
    EXPECT_EQ(r.stdout_text, "amat=21\n");
    EXPECT_FALSE(r.isolation.empty());
}

TEST(Sandbox, TimeoutKillsTheChild) {
    auto sb = python_sandbox(std::chrono::milliseconds(500));
    fx::TempDir dir;
    const auto start = std::chrono::steady_clock::now();
    const auto r = sb.run("import time\ntime.sleep(30)\n", dir.path());
    EXPECT_TRUE(r.timed_out);
    EXPECT_FALSE(r.success());
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(Sandbox, OutputIsCapped) {
    auto sb = python_sandbox();
    fx::TempDir dir;
    const auto r = sb.run("print('x' * 100000)\n", dir.path());
    EXPECT_TRUE(r.output_truncated);
    EXPECT_LE(r.stdout_text.size(), 4096u);
}

TEST(Sandbox, WritesOutsideWorkDirAreDenied) {
    if (landlock_abi() < 1) GTEST_SKIP() << "kernel has no Landlock";
    auto sb = python_sandbox();
    fx::TempDir outside, work;
    const auto canary = outside / "canary.txt";
    const auto r = sb.run("open(" + json(canary.string()).dump() + ", 'w').write('escaped')\n"
                          "open('inside.txt', 'w').write('ok')\n",
                          work.path());
    EXPECT_FALSE(r.success());
    EXPECT_FALSE(fs::exists(canary));
    const auto ok = sb.run("open('inside.txt', 'w').write('ok')\n", work.path());
    EXPECT_TRUE(ok.success()) << ok.log();
    EXPECT_TRUE(fs::exists(work / "inside.txt"));
}

TEST(Sandbox, NetworkConnectIsDenied) {
    if (landlock_abi() < 4) GTEST_SKIP() << "kernel cannot restrict TCP";
    auto sb = python_sandbox();
    fx::TempDir work;
    const auto r = sb.run("import socket\ns = socket.socket()\ns.settimeout(2)\n"
                          "s.connect(('127.0.0.1', 9))\n",
                          work.path());
    EXPECT_FALSE(r.success());
    EXPECT_NE(r.stderr_text.find("PermissionError"), std::string::npos) << r.stderr_text;
}

TEST(Sandbox, PreflightRejectsMissingInterpreter) {
    ProcessSandboxConfig cfg;
    cfg.command_template = "no-such-interpreter-xyz {program}";
    try {
        ProcessSandbox(cfg).preflight();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SandboxFailed);
    }
}

TEST(Program, AdvisoryScan) {
    EXPECT_TRUE(scan_program("print(1)").empty());
    EXPECT_EQ(scan_program("import socket\nopen('x')").size(), 2u);
}
