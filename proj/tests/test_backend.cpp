#include <gtest/gtest.h>

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <thread>

#include "gauntlet/backend/factory.hpp"
#include "gauntlet/backend/http.hpp"
#include "gauntlet/backend/replay.hpp"
#include "gauntlet/util/hash.hpp"
#include "support.hpp"

using namespace gauntlet;
using namespace gauntlet::backend;
namespace fx = gauntlet::fixture;

namespace {

AgentRequest request(std::string role = "validator", std::string user = "judge this", std::string tag = "t") {
    AgentRequest r;
    r.role_name = std::move(role);
    r.system_prompt = "You are a test agent.";
    r.user_prompt = std::move(user);
    r.temperature = Temperature{0.3};
    r.request_tag = std::move(tag);
    return r;
}

/// Canonical digest computed independently of request_digest().
std::string oracle_digest(const AgentRequest& r) {
    char t[32];
    std::snprintf(t, sizeof t, "%.6f", r.temperature.value());
    return hash::sha256_hex(json::array({r.role_name, r.system_prompt, r.user_prompt, t}).dump());
}

}  // namespace

TEST(Mock, SameRequestTwiceIsByteIdentical) {
    auto be = mock_script({fx::rule("*", "{{pick:a|b|c}} {{int:1:1000}} {{digest}}")}, 42);
    const auto a = be->complete(request());
    const auto b = be->complete(request());
    EXPECT_EQ(a.text, b.text);
    EXPECT_EQ(a.provenance, Provenance::Mock);
}

TEST(Mock, SeedAndTagVaryTheChoice) {
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        seen.insert(mock_script({fx::rule("*", "{{int:1:1000000}}")}, seed)->complete(request()).text);
    }
    EXPECT_GT(seen.size(), 15u);
    auto be = mock_script({fx::rule("*", "{{int:1:1000000}}")}, 1);
    EXPECT_NE(be->complete(request("validator", "judge this", "x")).text,
              be->complete(request("validator", "judge this", "y")).text);
}

TEST(Mock, TemplatePassthroughAndFirstMatchWins) {
    auto be = mock_script({fx::rule("validator", "SIMILARITY: EXACT_MATCH\nQUALITY: ISCA_WORTHY", "EXACT_MATCH"),
                           fx::rule("valid*", "first"), fx::rule("validator", "second")});
    EXPECT_EQ(be->complete(request("validator", "options: EXACT_MATCH or not")).text,
              "SIMILARITY: EXACT_MATCH\nQUALITY: ISCA_WORTHY");
    EXPECT_EQ(be->complete(request("validator", "plain")).text, "first");
}

TEST(Mock, NoRulesGivesSentinel) {
    auto be = mock_script({});
    EXPECT_EQ(be->complete(request()).text, kMockSentinel);
    auto be2 = mock_script({fx::rule("architect", "x")});
    EXPECT_EQ(be2->complete(request("validator")).text, kMockSentinel);
}

TEST(Mock, IntTokenStaysInRange) {
    auto be = mock_script({fx::rule("*", "{{int:3:7}}")});
    for (int i = 0; i < 200; ++i) {
        const int v = std::stoi(be->complete(request("r", "u" + std::to_string(i))).text);
        ASSERT_GE(v, 3);
        ASSERT_LE(v, 7);
    }
}

TEST(Mock, TagMatcher) {
    auto be = mock_script({fx::rule("*", "tagged", "", "/retry-1"), fx::rule("*", "plain")});
    EXPECT_EQ(be->complete(request("r", "u", "x/retry-1")).text, "tagged");
    EXPECT_EQ(be->complete(request("r", "u", "x")).text, "plain");
}

TEST(MockScript, JsonRoundTripAndOverlay) {
    const json j = {{"rules",
                     {{{"role", "architect"}, {"contains", "DOMAIN"}, {"response", "A"}},
                      {{"role", "*"}, {"responses", {"B", "C"}}}}}};
    const auto s = MockScript::from_json(j);
    ASSERT_EQ(s.rules.size(), 2u);
    EXPECT_EQ(MockScript::from_json(s.to_json()).rules.size(), 2u);
    const auto o = s.overlaid_by(MockScript{{fx::rule("*", "Z")}});
    ASSERT_EQ(o.rules.size(), 3u);
    EXPECT_EQ(o.rules[0].responses[0], "Z");
    EXPECT_THROW(MockScript::from_json(json{{"rules", {{{"role", "x"}, {"bogus", 1}}}}}), Error);
}

TEST(Digest, MatchesOracleAndIgnoresTag) {
    const auto a = request("r", "u", "tag-1");
    const auto b = request("r", "u", "tag-2");
    EXPECT_EQ(request_digest(a), oracle_digest(a));
    EXPECT_EQ(request_digest(a), request_digest(b));
    auto c = a;
    c.temperature = Temperature{0.4};
    EXPECT_NE(request_digest(a), request_digest(c));
}

TEST(Request, Validation) {
    auto r = request();
    r.user_prompt = " ";
    EXPECT_THROW(r.validate(), Error);
    BackendConfig c;
    c.kind = BackendKind::Http;
    EXPECT_THROW(c.validate(), Error);
    c.base_url = "http://localhost:1";
    EXPECT_NO_THROW(c.validate());
    c.seed = 3;
    EXPECT_THROW(c.validate(), Error);
    BackendConfig m;
    m.max_parallel = 0;
    EXPECT_THROW(m.validate(), Error);
}

TEST(Client, TranscriptCountsEveryCallIncludingFailures) {
    fx::TempDir dir;
    Transcript::Options opts;
    opts.sink = dir / "t.jsonl";
    auto transcript = std::make_shared<Transcript>(opts);
    AgentClient client(mock_script({fx::rule("*", "ok")}), transcript, 2);
    for (int i = 0; i < 5; ++i) client.complete(request("r", "u" + std::to_string(i)));
    auto bad = request();
    bad.system_prompt.clear();
    EXPECT_THROW(client.complete(bad), Error);
    EXPECT_EQ(client.calls(), 5u);
    EXPECT_EQ(transcript->size(), 5u);
    const auto loaded = load_transcript(dir / "t.jsonl");
    ASSERT_EQ(loaded.size(), 5u);
    EXPECT_EQ(loaded[0].digest, request_digest(request("r", "u0")));
    EXPECT_EQ(loaded[0].response->text, "ok");
}

class Throwing : public Backend {
public:
    AgentResponse complete(const AgentRequest&) override { throw Error(ErrorCode::ProviderError, "boom"); }
    Provenance provenance() const noexcept override { return Provenance::Live; }
};

TEST(Client, FailedCallIsStillTranscribed) {
    auto transcript = std::make_shared<Transcript>();
    AgentClient client(std::make_shared<Throwing>(), transcript, 1);
    EXPECT_THROW(client.complete(request()), Error);
    const auto e = transcript->entries();
    ASSERT_EQ(e.size(), 1u);
    EXPECT_FALSE(e[0].response);
    EXPECT_NE(e[0].error.find("boom"), std::string::npos);
}

TEST(Transcript, DigestCollisionIsHardError) {
    Transcript t;
    TranscriptEntry a;
    a.digest = "same";
    a.request = request("r", "one");
    t.append(a);
    TranscriptEntry b = a;
    t.append(b);  // identical request under one digest is fine
    b.request = request("r", "two");
    try {
        t.append(b);
        FAIL() << "expected a collision";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DigestCollision);
    }
}

TEST(Client, BoundedConcurrency) {
    auto rec = std::make_shared<fx::RecordingBackend>(mock_script({fx::rule("*", "ok")}));
    rec->set_before([](const AgentRequest&) { std::this_thread::sleep_for(std::chrono::milliseconds(15)); });
    auto client = fx::make_client(rec, 3);
    std::vector<AgentRequest> batch;
    for (int i = 0; i < 12; ++i) batch.push_back(request("r", "u" + std::to_string(i)));
    const auto out = client->complete_all(batch);
    ASSERT_EQ(out.size(), 12u);
    EXPECT_LE(rec->peak_in_flight(), 3);
    EXPECT_GE(rec->peak_in_flight(), 2);
}

TEST(Client, CompleteAllIsABarrierInRequestOrder) {
    auto be = mock_script({fx::rule("*", "{{tag}}")});
    auto transcript = std::make_shared<Transcript>();
    AgentClient client(be, transcript, 4);
    std::vector<AgentRequest> batch = {request("a", "1", "first"), request("b", "2", "second")};
    const auto out = client.complete_all(batch);
    EXPECT_EQ(out[0].text, "first");
    EXPECT_EQ(out[1].text, "second");
    const auto e = transcript->entries();
    ASSERT_EQ(e.size(), 2u);
    for (const auto& x : e) {
        for (const auto& y : e) EXPECT_LT(x.issued_seq, y.completed_seq);
    }
}

TEST(AskStructured, RepromptsOnceWithCorrection) {
    auto rec = std::make_shared<fx::RecordingBackend>(
        mock_script({fx::rule("*", "GOOD", "", "/retry-1"), fx::rule("*", "bad")}));
    auto client = fx::make_client(rec);
    auto parse = [](std::string_view s) {
        if (s != "GOOD") throw ParseError("expected GOOD");
        return std::string(s);
    };
    EXPECT_EQ(ask_structured(*client, request(), parse, ErrorCode::ValidationFailed), "GOOD");
    const auto reqs = rec->requests();
    ASSERT_EQ(reqs.size(), 2u);
    EXPECT_NE(reqs[1].user_prompt.find("[FORMAT CORRECTION]"), std::string::npos);
    EXPECT_NE(reqs[1].user_prompt.find("expected GOOD"), std::string::npos);

    auto always_bad = fx::make_client(mock_script({fx::rule("*", "bad")}));
    try {
        ask_structured(*always_bad, request(), parse, ErrorCode::ValidationFailed);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ValidationFailed);
    }
}

TEST(Replay, ServesRecordedResponses) {
    auto transcript = std::make_shared<Transcript>();
    AgentClient rec(mock_script({fx::rule("*", "{{int:1:99999}}-{{tag}}")}, 9), transcript, 1);
    const auto first = rec.complete(request("r", "u", "a"));
    const auto second = rec.complete(request("r", "u", "b"));  // same digest, different tag
    ReplayBackend replay(transcript->entries());
    EXPECT_EQ(replay.recorded_digests(), 1u);
    const auto rb = replay.complete(request("r", "u", "b"));
    EXPECT_EQ(rb.text, second.text);
    EXPECT_EQ(rb.provenance, Provenance::Replay);
    EXPECT_EQ(replay.complete(request("r", "u", "a")).text, first.text);
}

TEST(Replay, MissNamesTheDigest) {
    ReplayBackend replay({});
    const auto r = request("r", "never recorded");
    try {
        replay.complete(r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ReplayMiss);
        EXPECT_NE(std::string(e.what()).find(oracle_digest(r)), std::string::npos);
    }
}

TEST(Factory, ReplayNeedsTranscript) {
    BackendConfig c;
    c.kind = BackendKind::Replay;
    EXPECT_THROW(make_backend(c, {}), Error);
    fx::TempDir dir;
    BackendSources s;
    s.replay_transcript = dir / "missing.jsonl";
    EXPECT_THROW(make_backend(c, s), Error);
}

// Live client against a local OpenAI-compatible server.

class LocalServer {
public:
    explicit LocalServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post("/v1/chat/completions", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LocalServer() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

namespace {

BackendConfig http_config(const std::string& url) {
    BackendConfig c;
    c.kind = BackendKind::Http;
    c.base_url = url;
    c.model_id = "test-model";
    c.retry_limit = 3;
    c.backoff_base = std::chrono::milliseconds(100);
    c.request_timeout = std::chrono::seconds(10);
    return c;
}

std::string completion(const std::string& text) {
    return json{{"model", "test-model"},
                {"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}},
                {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 3}}}}
        .dump();
}

}  // namespace

TEST(Http, WireFormatAndAuth) {
    ::setenv("GAUNTLET_API_KEY", "sk-test", 1);
    json seen;
    std::string auth;
    LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen = json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(completion("hello"), "application/json");
    });
    HttpBackend be(http_config(server.url()));
    ::unsetenv("GAUNTLET_API_KEY");
    const auto r = be.complete(request());
    EXPECT_EQ(r.text, "hello");
    EXPECT_EQ(r.provenance, Provenance::Live);
    EXPECT_EQ(r.token_usage.input, 11);
    EXPECT_EQ(auth, "Bearer sk-test");
    EXPECT_EQ(seen["model"], "test-model");
    EXPECT_EQ(seen["messages"].size(), 2u);
    EXPECT_EQ(seen["messages"][0]["role"], "system");
    EXPECT_EQ(seen["messages"][1]["content"], "judge this");
    EXPECT_DOUBLE_EQ(seen["temperature"].get<double>(), 0.3);
    EXPECT_EQ(seen["max_tokens"], 4096);
}

TEST(Http, RetriesRateLimitsWithExponentialBackoff) {
    std::atomic<int> hits{0};
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        if (++hits <= 2) {
            res.status = 429;
            res.set_content(R"({"error":{"message":"slow down"}})", "application/json");
            return;
        }
        res.set_content(completion("finally"), "application/json");
    });
    std::vector<std::chrono::milliseconds> sleeps;
    HttpBackend be(http_config(server.url()), [&](std::chrono::milliseconds d) { sleeps.push_back(d); });
    EXPECT_EQ(be.complete(request()).text, "finally");
    EXPECT_EQ(hits.load(), 3);
    EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100),
                                                               std::chrono::milliseconds(200)}));
}

TEST(Http, ExhaustedRetriesAreBackendUnavailable) {
    std::atomic<int> hits{0};
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 503;
    });
    HttpBackend be(http_config(server.url()), [](std::chrono::milliseconds) {});
    try {
        be.complete(request());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
    }
    EXPECT_EQ(hits.load(), 4);
}

TEST(Http, ProviderErrorIsNotRetriedAndKeepsMessage) {
    std::atomic<int> hits{0};
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 400;
        res.set_content(R"({"error":{"message":"context length exceeded"}})", "application/json");
    });
    HttpBackend be(http_config(server.url()), [](std::chrono::milliseconds) {});
    try {
        be.complete(request());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ProviderError);
        EXPECT_NE(std::string(e.what()).find("context length exceeded"), std::string::npos);
    }
    EXPECT_EQ(hits.load(), 1);
}

TEST(Http, ErrorPayloadWithOkStatus) {
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"error":{"message":"model overloaded"}})", "application/json");
    });
    HttpBackend be(http_config(server.url()), [](std::chrono::milliseconds) {});
    try {
        be.complete(request());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ProviderError);
        EXPECT_NE(std::string(e.what()).find("model overloaded"), std::string::npos);
    }
}

TEST(Http, TransportFailureAfterRetries) {
    auto cfg = http_config("http://127.0.0.1:1/v1");
    cfg.retry_limit = 1;
    cfg.request_timeout = std::chrono::seconds(1);
    HttpBackend be(cfg, [](std::chrono::milliseconds) {});
    try {
        be.complete(request());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
    }
}

TEST(Http, InFlightBoundedByMaxParallel) {
    std::atomic<int> in_flight{0};
    std::atomic<int> peak{0};
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        const int now = ++in_flight;
        int p = peak.load();
        while (now > p && !peak.compare_exchange_weak(p, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(40));
        --in_flight;
        res.set_content(completion("ok"), "application/json");
    });
    auto be = std::make_shared<HttpBackend>(http_config(server.url()));
    AgentClient client(be, std::make_shared<Transcript>(), 2);
    std::vector<AgentRequest> batch;
    for (int i = 0; i < 8; ++i) batch.push_back(request("r", "u" + std::to_string(i)));
    const auto out = client.complete_all(batch);
    EXPECT_EQ(out.size(), 8u);
    EXPECT_LE(peak.load(), 2);
    EXPECT_GE(peak.load(), 1);
}

TEST(Http, BaseUrlParsing) {
    EXPECT_EQ(parse_base_url("http://h:1/v1/").path_prefix, "/v1");
    EXPECT_EQ(parse_base_url("https://api.example.com").scheme_host_port, "https://api.example.com");
    EXPECT_THROW(parse_base_url("ftp://x"), Error);
    EXPECT_THROW(parse_base_url("localhost:8080"), Error);
}
