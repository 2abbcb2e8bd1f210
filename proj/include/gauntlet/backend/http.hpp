#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "gauntlet/backend/client.hpp"

namespace gauntlet::backend {

struct ParsedUrl {
    std::string scheme_host_port;  // "http://host:8080"
    std::string path_prefix;       // "/v1", never ending in '/'
};

ParsedUrl parse_base_url(const std::string& base_url);

/// OpenAI-compatible chat-completions client:
/// POST {base_url}/chat/completions with {model, messages, temperature, max_tokens}.
/// The bearer token is read from GAUNTLET_API_KEY at construction.
///
/// Transport failures, 408, 429 and 5xx responses are retried up to
/// retry_limit times with exponential backoff (backoff_base * 2^attempt);
/// exhausting retries raises backend-unavailable. Any other error status or
/// an error payload raises provider-error carrying the provider's message and
/// is never retried.
class HttpBackend : public Backend {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit HttpBackend(BackendConfig config, Sleeper sleeper = {});

    AgentResponse complete(const AgentRequest& request) override;
    Provenance provenance() const noexcept override { return Provenance::Live; }

    static json build_body(const AgentRequest& request, const std::string& model_id);

private:
    BackendConfig config_;
    ParsedUrl url_;
    std::string api_key_;
    Sleeper sleeper_;
};

}  // namespace gauntlet::backend
