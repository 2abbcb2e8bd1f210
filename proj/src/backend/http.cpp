#include "gauntlet/backend/http.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>

namespace gauntlet::backend {

namespace {

bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

std::string provider_message(const std::string& body) {
    auto j = json::parse(body, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("error")) {
        const auto& e = j["error"];
        if (e.is_object() && e.contains("message") && e["message"].is_string()) return e["message"].get<std::string>();
        if (e.is_string()) return e.get<std::string>();
    }
    return body.substr(0, 500);
}

}  // namespace

ParsedUrl parse_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::Configuration, "base_url '" + base_url + "' lacks a scheme");
    }
    const std::string scheme = base_url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw Error(ErrorCode::Configuration, "base_url scheme must be http or https");
    }
    const auto path_start = base_url.find('/', scheme_end + 3);
    ParsedUrl out;
    out.scheme_host_port = base_url.substr(0, path_start);
    if (path_start != std::string::npos) out.path_prefix = base_url.substr(path_start);
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
    if (out.scheme_host_port.size() <= scheme_end + 3) throw Error(ErrorCode::Configuration, "base_url has no host");
    return out;
}

HttpBackend::HttpBackend(BackendConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
    config_.validate();
    url_ = parse_base_url(*config_.base_url);
    if (const char* key = std::getenv("GAUNTLET_API_KEY")) api_key_ = key;
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

json HttpBackend::build_body(const AgentRequest& request, const std::string& model_id) {
    return json{{"model", model_id},
                {"messages", json::array({json{{"role", "system"}, {"content", request.system_prompt}},
                                          json{{"role", "user"}, {"content", request.user_prompt}}})},
                {"temperature", request.temperature.value()},
                {"max_tokens", request.max_output}};
}

AgentResponse HttpBackend::complete(const AgentRequest& request) {
    const std::string body = build_body(request, config_.model_id).dump();
    const std::string path = url_.path_prefix + "/chat/completions";
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    std::string last_failure;
    for (int attempt = 0; attempt <= config_.retry_limit; ++attempt) {
        if (attempt > 0) sleeper_(config_.backoff_base * (1LL << std::min(attempt - 1, 20)));

        httplib::Client cli(url_.scheme_host_port);
        cli.set_connection_timeout(10);
        cli.set_read_timeout(static_cast<time_t>(config_.request_timeout.count()));
        cli.set_write_timeout(30);
        const auto started = std::chrono::steady_clock::now();
        auto res = cli.Post(path, headers, body, "application/json");
        const auto latency =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

        if (!res) {
            last_failure = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (transient_status(res->status)) {
            last_failure = "http " + std::to_string(res->status) + ": " + provider_message(res->body);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw Error(ErrorCode::ProviderError,
                        "http " + std::to_string(res->status) + ": " + provider_message(res->body));
        }
        auto j = json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::ProviderError, "response is not JSON");
        if (j.contains("error") && !j["error"].is_null()) throw Error(ErrorCode::ProviderError, provider_message(res->body));
        const auto& choices = j.value("choices", json::array());
        if (!choices.is_array() || choices.empty() || !choices[0].contains("message") ||
            !choices[0]["message"].contains("content") || !choices[0]["message"]["content"].is_string()) {
            throw Error(ErrorCode::ProviderError, "response lacks choices[0].message.content");
        }
        AgentResponse out;
        out.text = choices[0]["message"]["content"].get<std::string>();
        out.model_id = j.value("model", config_.model_id);
        out.latency = latency;
        out.provenance = Provenance::Live;
        if (j.contains("usage") && j["usage"].is_object()) {
            out.token_usage.input = j["usage"].value("prompt_tokens", 0);
            out.token_usage.output = j["usage"].value("completion_tokens", 0);
        }
        if (out.text.empty()) throw Error(ErrorCode::ProviderError, "empty completion");
        return out;
    }
    throw Error(ErrorCode::BackendUnavailable, "giving up after " + std::to_string(config_.retry_limit + 1) +
                                                   " attempts; last failure: " + last_failure);
}

}  // namespace gauntlet::backend
