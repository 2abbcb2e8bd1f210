#include <gtest/gtest.h>

#include "gauntlet/ideation/ideation.hpp"
#include "gauntlet/ideation/parsers.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gauntlet;
using namespace gauntlet::ideation;
using backend::MockRule;
namespace fx = gauntlet::fixture;

namespace {

constexpr const char* kProblemReply =
    "[CONTEXT]: Out-of-order cores running pointer-heavy server code.\n"
    "[SYMPTOM]: {{int:22:48}}% of cycles stall on dependent loads.\n"
    "[CONSTRAINT]: Under 4 KB of new state.\n";

constexpr const char* kArchitectReply =
    "Title of Paper: Chain Sentinel {{int:1:999}}\n"
    "The Mechanism: A 128-entry table learns load chains at retirement.\n"
    "Why it Works: Chains recur, so the head can be issued early.\n"
    "Evaluation Plan: Simulate 30 server workloads.\n";

std::vector<MockRule> base_rules(const std::string& similarity = "DIFFERENT_APPROACH",
                                 const std::string& quality = "ISCA_WORTHY") {
    return {fx::rule("extractor", kProblemReply),
            fx::rule("repair", kProblemReply),
            fx::rule("qc", "GENERALITY_SCORE: 8\nCRITIQUE: general enough\n"),
            fx::rule("leak-judge", "REVEALS_MECHANISM: NO\nEVIDENCE: none\n"),
            fx::rule("architect", kArchitectReply),
            fx::rule("validator", "SIMILARITY: " + similarity + "\nQUALITY: " + quality + "\nJUSTIFICATION: ok\n"),
            fx::rule("expander-*", kProblemReply)};
}

std::vector<MockRule> with_front(MockRule r, std::vector<MockRule> rest) {
    rest.insert(rest.begin(), std::move(r));
    return rest;
}

ExtractionInput input(std::string id = "paper-a") {
    ExtractionInput in;
    in.paper_id = std::move(id);
    in.text = "1 Introduction\nDependent loads serialize execution in server code.\n"
              "3 Design\nWe propose the chain buffer that captures producer consumer pairs and replays them "
              "ahead of the demand stream using a small side table.\n";
    in.problem_window = in.text.find("3 Design");
    return in;
}

IdeationConfig small_config() {
    IdeationConfig c;
    c.runs_per_paper = 2;
    c.n_proposals = 3;
    c.leakage.ngram = 5;
    return c;
}

}  // namespace

TEST(Extraction, PromptSeesOnlyTheWindow) {
    auto rec = std::make_shared<fx::RecordingBackend>(backend::mock_script(base_rules()));
    auto client = fx::make_client(rec);
    const auto in = input();
    const auto p = extract_problem(in, *client, "paper-a-r1");
    EXPECT_EQ(p.source, ProblemSource::PaperExtraction);
    ASSERT_EQ(rec->count(), 1u);
    const auto& req = rec->requests()[0];
    EXPECT_NE(req.user_prompt.find("Dependent loads serialize"), std::string::npos);
    EXPECT_EQ(req.user_prompt.find("chain buffer"), std::string::npos);
    EXPECT_EQ(req.user_prompt.find("3 Design"), std::string::npos);
}

TEST(Extraction, WindowCutsOnUtf8Boundary) {
    ExtractionInput in;
    in.paper_id = "u";
    in.text = "ab\xc3\xa9" "cd";  // a b e-acute c d
    in.problem_window = 3;        // falls inside the two-byte character
    EXPECT_EQ(in.window(), "ab");
    EXPECT_EQ(in.remainder(), "\xc3\xa9" "cd");
    in.problem_window = 0;
    EXPECT_THROW(in.validate(), Error);
    in.problem_window = 99;
    EXPECT_THROW(in.validate(), Error);
}

TEST(Extraction, SymptomWithoutNumberIsRejectedAfterReprompt) {
    auto client = fx::make_client(backend::mock_script(
        {fx::rule("extractor", "[CONTEXT]: c\n[SYMPTOM]: it is slow\n[CONSTRAINT]: cheap\n")}));
    try {
        extract_problem(input(), *client, "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ExtractionFailed);
    }
    EXPECT_EQ(client->calls(), 2u);
}

TEST(Generality, LowScoreTriggersOneRepair) {
    auto rules = with_front(fx::rule("qc", "GENERALITY_SCORE: 8\nCRITIQUE: fixed\n", "", "/qc-rescore"),
                            with_front(fx::rule("qc", "GENERALITY_SCORE: 4\nCRITIQUE: too narrow\n"), base_rules()));
    auto rec = std::make_shared<fx::RecordingBackend>(backend::mock_script(rules));
    auto client = fx::make_client(rec);
    const auto [p, report] = qc_generality(fx::sample_problem(), *client, 7);
    EXPECT_EQ(report.initial_score, 4);
    EXPECT_EQ(report.score, 8);
    EXPECT_TRUE(report.repaired);
    EXPECT_FALSE(report.below_threshold);
    EXPECT_EQ(p.generality_score, 8);
    ASSERT_EQ(rec->count(), 3u);
    EXPECT_EQ(rec->requests()[1].role_name, "repair");
    EXPECT_NE(rec->requests()[1].user_prompt.find("too narrow"), std::string::npos);
}

TEST(Generality, ScoreAtThresholdSkipsRepair) {
    auto client = fx::make_client(backend::mock_script({fx::rule("qc", "GENERALITY_SCORE: 7\nCRITIQUE: fine\n")}));
    const auto [p, report] = qc_generality(fx::sample_problem(), *client, 7);
    EXPECT_FALSE(report.repaired);
    EXPECT_EQ(client->calls(), 1u);
}

TEST(Leakage, LexicalOverlapMatchesBruteForceOracle) {
    fx::Gen g(3);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = g.sentence(g.size(0, 25));
        const auto b = g.sentence(g.size(0, 25));
        const auto n = g.size(2, 5);
        const bool expected = oracle::shares_ngram(oracle::tokens(a), oracle::tokens(b), n);
        ASSERT_EQ(!lexical_overlaps(a, b, n).empty(), expected) << a << " | " << b << " n=" << n;
    }
}

TEST(Leakage, SpansAreMerged) {
    const auto spans = lexical_overlaps("x one two three four five y", "one two three four five", 3);
    ASSERT_EQ(spans.size(), 1u);
    EXPECT_EQ(spans[0], "one two three four five");
}

TEST(Leakage, CopiedSolutionTextIsFlaggedEvenWhenJudgeSaysNo) {
    auto p = fx::sample_problem();
    p.constraint = "Use the chain buffer that captures producer consumer pairs.";
    auto client = fx::make_client(backend::mock_script(base_rules()));
    LeakageOptions opt;
    opt.ngram = 5;
    const auto r = check_leakage(p, input(), *client, opt);
    EXPECT_TRUE(r.leaked);
    EXPECT_TRUE(r.lexical);
    EXPECT_EQ(r.judge, std::optional<bool>(false));
    ASSERT_FALSE(r.evidence.empty());
    EXPECT_NE(r.evidence[0].find("chain buffer"), std::string::npos);
}

TEST(Leakage, JudgeYesLeaksAndJudgeFailureDegradesToLexical) {
    auto yes = fx::make_client(backend::mock_script({fx::rule("leak-judge", "REVEALS_MECHANISM: YES\nEVIDENCE: names it\n")}));
    EXPECT_TRUE(check_leakage(fx::sample_problem(), input(), *yes).leaked);
    auto broken = fx::make_client(backend::mock_script({fx::rule("leak-judge", "maybe")}));
    const auto r = check_leakage(fx::sample_problem(), input(), *broken);
    EXPECT_FALSE(r.leaked);
    EXPECT_FALSE(r.judge.has_value());
    EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Generation, OneCallPerTemperatureAndTemperaturesPropagate) {
    auto rec = std::make_shared<fx::RecordingBackend>(backend::mock_script(base_rules()));
    auto client = fx::make_client(rec);
    const auto temps = temperature_ladder(5, 0.5, 0.9);
    ArchitectOptions opt;
    opt.feedback_notes = {"A prior candidate failed tier 0"};
    const auto slots = generate_mechanisms(fx::sample_problem(), 5, temps, *client, opt);
    ASSERT_EQ(slots.size(), 5u);
    ASSERT_EQ(rec->count(), 5u);
    std::vector<double> seen;
    for (const auto& r : rec->requests()) {
        seen.push_back(r.temperature.value());
        EXPECT_NE(r.user_prompt.find("A prior candidate failed tier 0"), std::string::npos);
    }
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(seen, temps);
    for (std::size_t i = 0; i < 5; ++i) {
        ASSERT_TRUE(slots[i].proposal);
        EXPECT_EQ(slots[i].slot, i + 1);
        EXPECT_EQ(slots[i].proposal->temperature.value(), temps[i]);
        EXPECT_EQ(slots[i].proposal->problem_id, "p1");
    }
    EXPECT_THROW(generate_mechanisms(fx::sample_problem(), 3, temps, *client), Error);
}

TEST(Generation, UnparseableSlotKeepsItsError) {
    auto rules = with_front(fx::rule("architect", "no sections here", "", "-p2/"), base_rules());
    auto client = fx::make_client(backend::mock_script(rules));
    const auto temps = temperature_ladder(3, 0.5, 0.9);
    const auto slots = generate_mechanisms(fx::sample_problem(), 3, temps, *client);
    EXPECT_TRUE(slots[0].proposal);
    EXPECT_FALSE(slots[1].proposal);
    EXPECT_FALSE(slots[1].error.empty());
    EXPECT_TRUE(slots[2].proposal);
}

TEST(Validation, WithAndWithoutGroundTruth) {
    auto rec = std::make_shared<fx::RecordingBackend>(backend::mock_script(base_rules("EXACT_MATCH")));
    auto client = fx::make_client(rec);
    const auto m = fx::sample_proposal();
    const auto with = validate_proposal(m, std::string_view("FULL PAPER BODY"), *client);
    EXPECT_EQ(with.verdict(), Verdict::RediscoverySuccess);
    EXPECT_NE(rec->requests()[0].user_prompt.find("FULL PAPER BODY"), std::string::npos);
    const auto without = validate_proposal(m, std::nullopt, *client);
    EXPECT_FALSE(without.ground_truth);
    EXPECT_EQ(without.similarity, SimilarityClass::DifferentApproach);
    EXPECT_EQ(without.verdict(), Verdict::AlternativeSuccess);
    EXPECT_EQ(rec->requests()[1].user_prompt.find("SIMILARITY:"), std::string::npos);
}

TEST(Validation, ParsersAcceptEveryClassSpelling) {
    for (const auto& row : oracle::verdict_table()) {
        const auto r = parse::judgment(std::string("SIMILARITY: ") + row.similarity + "\nQUALITY: " + row.quality +
                                           "\nJUSTIFICATION: x\n",
                                       true);
        EXPECT_EQ(to_string(classify_verdict(*r.similarity, r.quality)), row.verdict);
    }
    EXPECT_THROW(parse::judgment("QUALITY: GREAT\n", false), backend::ParseError);
}

TEST(Expansion, ThreeModesWithLineage) {
    auto client = fx::make_client(backend::mock_script(base_rules()));
    const auto p = fx::sample_problem();
    const auto m = fx::sample_proposal();
    ValidationJudgment ok;
    ok.similarity = SimilarityClass::DifferentApproach;
    ok.quality = QualityClass::IscaWorthy;
    const auto ex = expand_frontier(p, m, ok, *client);
    ASSERT_EQ(ex.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        ASSERT_TRUE(ex[i].ok()) << ex[i].error;
        EXPECT_EQ(ex[i].mode, kAllExpansionModes[i]);
        EXPECT_EQ(ex[i].new_problem->source, ProblemSource::Expansion);
        EXPECT_EQ(ex[i].new_problem->lineage->parent_id, "p1");
    }
    ValidationJudgment fail = ok;
    fail.quality = QualityClass::Flawed;
    try {
        expand_frontier(p, m, fail, *client);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Precondition);
    }
}

TEST(Pipeline, CellsStatsAndCandidates) {
    auto client = fx::make_client(backend::mock_script(base_rules()));
    const std::vector<ExtractionInput> corpus = {input("b"), input("a")};
    const auto report = run_ideation(corpus, *client, small_config());
    ASSERT_EQ(report.cells.size(), 4u);
    EXPECT_EQ(report.cells[0].problem_id, "a-r1");
    EXPECT_EQ(report.cells[3].problem_id, "b-r2");
    EXPECT_EQ(report.stats.n_total(), 4u);
    EXPECT_EQ(report.stats.n_alternative, 4u);
    EXPECT_EQ(report.proposal_stats.n_total(), 12u);
    EXPECT_FALSE(report.partial());
    for (const auto& c : report.cells) {
        ASSERT_TRUE(c.result);
        EXPECT_EQ(c.result->expansions.size(), 3u);
        EXPECT_TRUE(c.frontier.empty());  // depth 1: expansions are produced, not processed
    }
    EXPECT_EQ(export_candidates(report).size(), 12u);
}

TEST(Pipeline, LeakedAndFailedCellsAreExcludedFromStats) {
    auto rules = with_front(
        fx::rule("leak-judge", "REVEALS_MECHANISM: YES\nEVIDENCE: names the buffer\n", "", "a-r1/"),
        with_front(fx::rule("extractor", "garbage", "", "a-r2/"), base_rules("EXACT_MATCH", "INCREMENTAL")));
    auto client = fx::make_client(backend::mock_script(rules));
    const std::vector<ExtractionInput> corpus = {input("a"), input("b")};
    const auto report = run_ideation(corpus, *client, small_config());
    EXPECT_EQ(report.cells[0].status, CellStatus::Leaked);
    EXPECT_EQ(report.cells[1].status, CellStatus::ExtractionFailed);
    EXPECT_EQ(report.excluded(), 2u);
    EXPECT_TRUE(report.partial());
    EXPECT_EQ(report.stats.n_total(), 2u);
    EXPECT_EQ(report.stats.n_fail, 2u);
    for (const auto& c : report.cells) {
        if (c.result) {
            EXPECT_TRUE(c.result->expansions.empty());
        }
    }
}

TEST(Pipeline, RecursionProcessesExpansionsWithoutGroundTruth) {
    auto rec = std::make_shared<fx::RecordingBackend>(backend::mock_script(base_rules()));
    auto client = fx::make_client(rec);
    auto cfg = small_config();
    cfg.runs_per_paper = 1;
    cfg.n_proposals = 2;
    cfg.recursion_depth = 2;
    const std::vector<ExtractionInput> corpus = {input("a")};
    const auto report = run_ideation(corpus, *client, cfg);
    ASSERT_EQ(report.cells[0].frontier.size(), 3u);
    EXPECT_EQ(report.frontier_stats.n_total(), 3u);
    for (const auto& f : report.cells[0].frontier) {
        EXPECT_EQ(f.depth, 1u);
        EXPECT_TRUE(f.expansions.size() == 3u);
        for (const auto& s : f.slots) EXPECT_FALSE(s.judgment->ground_truth);
    }
}

TEST(Pipeline, SynthesisHookRunsForTopLevelWinnersOnly) {
    auto client = fx::make_client(backend::mock_script(base_rules()));
    auto cfg = small_config();
    cfg.runs_per_paper = 1;
    cfg.recursion_depth = 2;
    std::atomic<int> calls{0};
    cfg.synthesis = [&](const ProblemStatement& p, const MechanismProposal& m) {
        ++calls;
        return json{{"problem", p.id}, {"proposal", m.id}};
    };
    const std::vector<ExtractionInput> corpus = {input("a")};
    const auto report = run_ideation(corpus, *client, cfg);
    EXPECT_EQ(calls.load(), 1);
    EXPECT_EQ((*report.cells[0].result->synthesis)["proposal"], "a-r1-p1");
}

TEST(Pipeline, PropertyStatsPartitionCountedCells) {
    fx::Gen g(17);
    const std::vector<std::string> sims = {"EXACT_MATCH", "FUNCTIONAL_EQUIVALENT", "DIFFERENT_APPROACH"};
    const std::vector<std::string> quals = {"ISCA_WORTHY", "INCREMENTAL", "FLAWED"};
    for (int trial = 0; trial < 15; ++trial) {
        auto rules = base_rules(g.pick(sims), g.pick(quals));
        rules.insert(rules.begin(), fx::rule("validator", "SIMILARITY: " + g.pick(sims) + "\nQUALITY: " +
                                                              g.pick(quals) + "\nJUSTIFICATION: x\n",
                                             "", "-p1/"));
        if (g.coin(0.3)) rules.insert(rules.begin(), fx::rule("extractor", "junk", "", "-r1/"));
        auto client = fx::make_client(backend::mock_script(rules, static_cast<std::uint64_t>(trial)));
        auto cfg = small_config();
        cfg.expand = false;
        cfg.n_proposals = g.size(1, 3);
        const std::vector<ExtractionInput> corpus = {input("a"), input("b")};
        const auto report = run_ideation(corpus, *client, cfg);
        std::size_t counted = 0;
        for (const auto& c : report.cells) counted += c.counted();
        ASSERT_EQ(report.stats.n_total() + report.excluded(), report.cells.size());
        ASSERT_EQ(report.stats.n_total(), counted);
        ASSERT_EQ(report.proposal_stats.n_total(), counted * cfg.n_proposals);
        // A cell is viable iff at least one of its slots is.
        for (const auto& c : report.cells) {
            if (!c.result) continue;
            bool any = false;
            for (const auto& s : c.result->slots) any = any || is_viable(s.verdict());
            ASSERT_EQ(is_viable(c.result->verdict()), any);
        }
    }
}
