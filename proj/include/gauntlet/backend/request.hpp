#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gauntlet/kernel/types.hpp"

namespace gauntlet::backend {

using json = nlohmann::json;

enum class Provenance { Live, Mock, Replay };
enum class BackendKind { Http, Mock, Replay };

std::string_view to_string(Provenance p) noexcept;
std::string_view to_string(BackendKind k) noexcept;
Provenance provenance_from(std::string_view s);
/// Accepts "http", "http-openai-compatible", "mock", "replay".
BackendKind backend_kind_from(std::string_view s);

struct AgentRequest {
    std::string role_name;
    std::string system_prompt;
    std::string user_prompt;
    Temperature temperature{0.2};
    int max_output = 4096;
    /// Opaque transcript key. Not part of the digest.
    std::string request_tag;

    void validate() const;
};

struct TokenUsage {
    std::int64_t input = 0;
    std::int64_t output = 0;
};

struct AgentResponse {
    std::string text;
    std::string model_id;
    std::chrono::milliseconds latency{0};
    TokenUsage token_usage;
    Provenance provenance = Provenance::Mock;
};

struct BackendConfig {
    BackendKind kind = BackendKind::Mock;
    std::optional<std::string> base_url;
    std::string model_id = "mock";
    int max_parallel = 4;
    int retry_limit = 3;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::seconds request_timeout{300};
    std::optional<std::uint64_t> seed;

    void validate() const;
};

/// Canonical serialisation of the digest-relevant request fields:
/// role, system prompt, user prompt and temperature (fixed 6 decimals).
std::string canonical_request(const AgentRequest& request);

/// SHA-256 of canonical_request().
std::string request_digest(const AgentRequest& request);

json to_json(const AgentRequest& r);
AgentRequest request_from_json(const json& j);
json to_json(const AgentResponse& r);
AgentResponse response_from_json(const json& j);

}  // namespace gauntlet::backend
