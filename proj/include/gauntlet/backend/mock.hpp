#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "gauntlet/backend/client.hpp"

namespace gauntlet::backend {

/// Reply returned when no rule matches. Never an error.
inline constexpr std::string_view kMockSentinel = "MOCK_SENTINEL: no scripted rule matched this request.";

/// One scripted behaviour. A rule matches when the role name matches
/// `role_pattern` (glob: `*`, `?`), the system or user prompt contains
/// `prompt_contains`, and the request tag contains `tag_contains`; empty
/// matchers always match.
///
/// Responses are templates. With several entries, one is chosen by a hash of
/// (seed, digest, tag). Templates may use:
///   {{digest}}           first 12 hex digits of the request digest
///   {{role}} {{tag}} {{temperature}}
///   {{pick:a|b|c}}       seeded choice among alternatives
///   {{int:lo:hi}}        seeded integer in [lo, hi]
/// All choices depend only on the request and seed, so a script is a pure
/// function of the request: concurrent execution order cannot change output.
struct MockRule {
    std::string role_pattern = "*";
    std::string prompt_contains;
    std::string tag_contains;
    std::vector<std::string> responses;
};

struct MockScript {
    std::vector<MockRule> rules;

    /// {"rules": [{"role": "...", "contains": "...", "tag": "...",
    ///             "response": "..." | "responses": ["...", ...]}]}
    static MockScript from_json(const json& j);
    static MockScript load(const std::filesystem::path& path);
    json to_json() const;

    /// Copy of this script with `other`'s rules placed first.
    MockScript overlaid_by(const MockScript& other) const;
};

bool glob_match(std::string_view pattern, std::string_view value) noexcept;

std::string render_mock_template(std::string_view tmpl, const AgentRequest& request, std::uint64_t seed,
                                 std::string_view digest);

class MockBackend : public Backend {
public:
    explicit MockBackend(MockScript script = {}, std::uint64_t seed = 0, std::string model_id = "mock");

    /// Replaces the installed rules; subsequent calls use the new script.
    void install(MockScript script);

    AgentResponse complete(const AgentRequest& request) override;
    Provenance provenance() const noexcept override { return Provenance::Mock; }

private:
    mutable std::mutex mu_;
    MockScript script_;
    std::uint64_t seed_;
    std::string model_id_;
};

/// Builds a mock behaviour from a rule list (first match wins).
std::shared_ptr<MockBackend> mock_script(std::vector<MockRule> rules, std::uint64_t seed = 0);

}  // namespace gauntlet::backend
