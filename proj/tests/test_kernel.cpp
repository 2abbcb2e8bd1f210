#include <gtest/gtest.h>

#include <algorithm>

#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/kernel/types.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gauntlet;
using gauntlet::fixture::Gen;
namespace fx = gauntlet::fixture;

TEST(Verdict, TruthTableMatchesOracle) {
    for (const auto& row : oracle::verdict_table()) {
        const auto v = classify_verdict(similarity_from(row.similarity), quality_from(row.quality));
        EXPECT_EQ(to_string(v), row.verdict) << row.similarity << " x " << row.quality;
    }
    EXPECT_EQ(oracle::verdict_table().size(), kAllSimilarities.size() * kAllQualities.size());
}

TEST(Verdict, Examples) {
    EXPECT_EQ(classify_verdict(SimilarityClass::ExactMatch, QualityClass::IscaWorthy), Verdict::RediscoverySuccess);
    EXPECT_EQ(classify_verdict(SimilarityClass::DifferentApproach, QualityClass::IscaWorthy),
              Verdict::AlternativeSuccess);
    EXPECT_EQ(classify_verdict(SimilarityClass::FunctionalEquivalent, QualityClass::Incremental), Verdict::Fail);
    EXPECT_EQ(classify_verdict(SimilarityClass::ExactMatch, QualityClass::Flawed), Verdict::Fail);
}

TEST(Verdict, EnumSpellingsRoundTrip) {
    for (auto s : kAllSimilarities) EXPECT_EQ(similarity_from(to_string(s)), s);
    for (auto q : kAllQualities) EXPECT_EQ(quality_from(to_string(q)), q);
    for (auto m : kAllExpansionModes) EXPECT_EQ(expansion_mode_from(to_string(m)), m);
    EXPECT_EQ(similarity_from("exact_match"), SimilarityClass::ExactMatch);
    EXPECT_THROW(quality_from("GREAT"), Error);
}

TEST(Stats, PaperCounts) {
    std::vector<Verdict> v;
    v.insert(v.end(), 232, Verdict::RediscoverySuccess);
    v.insert(v.end(), 239, Verdict::AlternativeSuccess);
    v.insert(v.end(), 4, Verdict::Fail);
    const auto s = aggregate_stats(v);
    EXPECT_EQ(s.n_total(), 475u);
    EXPECT_EQ(s.n_viable(), 471u);
    EXPECT_TRUE(oracle::close_to(s.rediscovery_rate(), oracle::ratio(232, 475)));
    EXPECT_TRUE(oracle::close_to(s.alternative_rate(), oracle::ratio(239, 475)));
    EXPECT_TRUE(oracle::close_to(s.viable_rate(), oracle::ratio(471, 475)));
    EXPECT_NEAR(s.viable_rate(), 0.9916, 1e-4);
}

TEST(Stats, EmptyIsAllZero) {
    const auto s = aggregate_stats({});
    EXPECT_EQ(s.n_total(), 0u);
    EXPECT_EQ(s.viable_rate(), 0.0);
    EXPECT_EQ(s.rediscovery_rate(), 0.0);
    EXPECT_EQ(s.fail_rate(), 0.0);
}

TEST(Stats, PropertyCountsPartitionAndRatesAdd) {
    Gen g(11);
    const std::vector<Verdict> all = {Verdict::RediscoverySuccess, Verdict::AlternativeSuccess, Verdict::Fail};
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Verdict> v(g.size(0, 300));
        for (auto& x : v) x = g.pick(all);
        const auto s = aggregate_stats(v);
        const auto r = std::count(v.begin(), v.end(), Verdict::RediscoverySuccess);
        const auto a = std::count(v.begin(), v.end(), Verdict::AlternativeSuccess);
        ASSERT_EQ(s.n_rediscovery, static_cast<std::size_t>(r));
        ASSERT_EQ(s.n_alternative, static_cast<std::size_t>(a));
        ASSERT_EQ(s.n_total(), v.size());
        ASSERT_NEAR(s.viable_rate(), s.rediscovery_rate() + s.alternative_rate(), 1e-12);
        if (!v.empty()) {
            ASSERT_TRUE(oracle::close_to(s.viable_rate(), oracle::ratio(r + a, std::ssize(v))));
        }
    }
}

TEST(Ladder, Examples) {
    EXPECT_EQ(temperature_ladder(5, 0.5, 0.9), (std::vector<double>{0.5, 0.6, 0.7, 0.8, 0.9}));
    EXPECT_EQ(temperature_ladder(1, 0.7, 0.7), (std::vector<double>{0.7}));
    EXPECT_EQ(temperature_ladder(3, 0.0, 1.0), (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(Ladder, Rejections) {
    EXPECT_THROW(temperature_ladder(0, 0.5, 0.9), Error);
    EXPECT_THROW(temperature_ladder(3, 0.9, 0.5), Error);
    EXPECT_THROW(temperature_ladder(1, 0.5, 0.9), Error);
    EXPECT_THROW(temperature_ladder(3, 0.0, 2.5), Error);
}

TEST(Ladder, PropertySortedEvenEndpointsExact) {
    Gen g(5);
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = g.size(2, 40);
        const double lo = g.real(0.0, 2.0);
        const double hi = g.real(lo, 2.0);
        const auto l = temperature_ladder(n, lo, hi);
        ASSERT_EQ(l.size(), n);
        ASSERT_EQ(l.front(), lo);
        ASSERT_EQ(l.back(), hi);
        ASSERT_TRUE(std::is_sorted(l.begin(), l.end()));
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_NEAR(l[i], lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1), 1e-9);
        }
    }
}

TEST(Problem, Invariants) {
    auto p = fx::sample_problem();
    EXPECT_NO_THROW(p.validate());
    auto q = p;
    q.symptom = "Latency is high.";
    EXPECT_THROW(q.validate(), Error);
    q = p;
    q.context = "  ";
    EXPECT_THROW(q.validate(), Error);
    q = p;
    q.generality_score = 11;
    EXPECT_THROW(q.validate(), Error);
    q = p;
    q.source = ProblemSource::Expansion;
    EXPECT_THROW(q.validate(), Error);
    q.lineage = Lineage{"p0", ExpansionMode::Lateral};
    EXPECT_NO_THROW(q.validate());
    q.source = ProblemSource::Manual;
    EXPECT_THROW(q.validate(), Error);
}

TEST(Proposal, Invariants) {
    const auto p = fx::sample_problem();
    auto m = fx::sample_proposal();
    EXPECT_NO_THROW(m.validate_against(p));
    m.problem_id = "other";
    EXPECT_THROW(m.validate_against(p), Error);
    m = fx::sample_proposal();
    m.title.clear();
    EXPECT_THROW(m.validate(), Error);
    EXPECT_THROW(Temperature{2.01}, Error);
    EXPECT_THROW(Temperature{-0.1}, Error);
}

TEST(Serialize, RoundTrips) {
    auto p = fx::sample_problem();
    p.generality_score = 8;
    p.source = ProblemSource::Expansion;
    p.lineage = Lineage{"p0", ExpansionMode::Foundational};
    const json jp = p;
    EXPECT_EQ(jp.get<ProblemStatement>(), p);
    const auto m = fx::sample_proposal();
    const json jm = m;
    EXPECT_EQ(jm.get<MechanismProposal>(), m);
    RunStats s{3, 2, 1};
    const json js = s;
    EXPECT_EQ(js.at("n_total"), 6);
    EXPECT_EQ(js.get<RunStats>(), s);
}

TEST(Serialize, StrictKeys) {
    json j{{"a", 1}, {"b", 2}};
    EXPECT_NO_THROW(require_known_keys(j, {"a", "b"}, "thing"));
    EXPECT_THROW(require_known_keys(j, {"a"}, "thing"), Error);
}
