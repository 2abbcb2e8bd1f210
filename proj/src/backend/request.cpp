#include "gauntlet/backend/request.hpp"

#include <cstdio>

#include "gauntlet/util/error.hpp"
#include "gauntlet/util/hash.hpp"
#include "gauntlet/util/text.hpp"

namespace gauntlet::backend {

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::Live: return "live";
        case Provenance::Mock: return "mock";
        case Provenance::Replay: return "replay";
    }
    return "mock";
}

std::string_view to_string(BackendKind k) noexcept {
    switch (k) {
        case BackendKind::Http: return "http";
        case BackendKind::Mock: return "mock";
        case BackendKind::Replay: return "replay";
    }
    return "mock";
}

Provenance provenance_from(std::string_view s) {
    if (s == "live") return Provenance::Live;
    if (s == "mock") return Provenance::Mock;
    if (s == "replay") return Provenance::Replay;
    throw Error(ErrorCode::InvalidArgument, "unknown provenance '" + std::string(s) + "'");
}

BackendKind backend_kind_from(std::string_view s) {
    if (s == "http" || s == "http-openai-compatible") return BackendKind::Http;
    if (s == "mock") return BackendKind::Mock;
    if (s == "replay") return BackendKind::Replay;
    throw Error(ErrorCode::Configuration, "unknown backend kind '" + std::string(s) + "'");
}

void AgentRequest::validate() const {
    if (text::trim(role_name).empty()) throw Error(ErrorCode::InvalidArgument, "agent request without role_name");
    if (text::trim(system_prompt).empty() || text::trim(user_prompt).empty()) {
        throw Error(ErrorCode::InvalidArgument, "agent request '" + role_name + "' has an empty prompt");
    }
    if (max_output <= 0) throw Error(ErrorCode::InvalidArgument, "agent request max_output must be positive");
}

void BackendConfig::validate() const {
    if (max_parallel < 1) throw Error(ErrorCode::Configuration, "max_parallel must be >= 1");
    if (retry_limit < 0) throw Error(ErrorCode::Configuration, "retry_limit must be >= 0");
    if (backoff_base.count() < 0) throw Error(ErrorCode::Configuration, "backoff_base must be >= 0");
    const bool http = kind == BackendKind::Http;
    if (http && (!base_url || base_url->empty())) {
        throw Error(ErrorCode::Configuration, "http backend requires base_url");
    }
    if (!http && base_url) throw Error(ErrorCode::Configuration, "base_url is only valid for the http backend");
    if (seed && kind != BackendKind::Mock) throw Error(ErrorCode::Configuration, "seed is only valid for the mock backend");
    if (text::trim(model_id).empty()) throw Error(ErrorCode::Configuration, "model_id must be non-empty");
}

std::string canonical_request(const AgentRequest& request) {
    char temp[32];
    std::snprintf(temp, sizeof temp, "%.6f", request.temperature.value());
    json canon = json::array({request.role_name, request.system_prompt, request.user_prompt, std::string(temp)});
    return canon.dump();
}

std::string request_digest(const AgentRequest& request) { return hash::sha256_hex(canonical_request(request)); }

json to_json(const AgentRequest& r) {
    return json{{"role_name", r.role_name},
                {"system_prompt", r.system_prompt},
                {"user_prompt", r.user_prompt},
                {"temperature", r.temperature.value()},
                {"max_output", r.max_output},
                {"request_tag", r.request_tag}};
}

AgentRequest request_from_json(const json& j) {
    AgentRequest r;
    r.role_name = j.at("role_name").get<std::string>();
    r.system_prompt = j.at("system_prompt").get<std::string>();
    r.user_prompt = j.at("user_prompt").get<std::string>();
    r.temperature = Temperature(j.at("temperature").get<double>());
    r.max_output = j.value("max_output", 4096);
    r.request_tag = j.value("request_tag", std::string());
    return r;
}

json to_json(const AgentResponse& r) {
    return json{{"text", r.text},
                {"model_id", r.model_id},
                {"latency_ms", r.latency.count()},
                {"input_tokens", r.token_usage.input},
                {"output_tokens", r.token_usage.output},
                {"provenance", std::string(to_string(r.provenance))}};
}

AgentResponse response_from_json(const json& j) {
    AgentResponse r;
    r.text = j.at("text").get<std::string>();
    r.model_id = j.value("model_id", std::string());
    r.latency = std::chrono::milliseconds(j.value("latency_ms", 0));
    r.token_usage.input = j.value("input_tokens", 0);
    r.token_usage.output = j.value("output_tokens", 0);
    r.provenance = provenance_from(j.value("provenance", std::string("live")));
    return r;
}

}  // namespace gauntlet::backend
