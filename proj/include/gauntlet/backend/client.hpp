#pragma once

#include <atomic>
#include <memory>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gauntlet/backend/request.hpp"
#include "gauntlet/backend/transcript.hpp"
#include "gauntlet/util/error.hpp"

namespace gauntlet::backend {

/// A model provider. Implementations must be safe to call concurrently.
class Backend {
public:
    virtual ~Backend() = default;
    virtual AgentResponse complete(const AgentRequest& request) = 0;
    virtual Provenance provenance() const noexcept = 0;
};

/// Run-scoped entry point for every agent call: validates the request,
/// bounds in-flight calls to max_parallel and appends each call, successful
/// or not, to the transcript.
class AgentClient {
public:
    AgentClient(std::shared_ptr<Backend> backend, std::shared_ptr<Transcript> transcript, int max_parallel = 4);

    AgentResponse complete(const AgentRequest& request);
    /// Issues every request before any is dispatched, runs them concurrently
    /// and returns once all have completed (a join barrier). Responses are in
    /// request order; the lowest-index failure is rethrown.
    std::vector<AgentResponse> complete_all(const std::vector<AgentRequest>& requests);

    Transcript& transcript() noexcept { return *transcript_; }
    std::shared_ptr<Transcript> transcript_ptr() const noexcept { return transcript_; }
    std::size_t calls() const noexcept { return calls_.load(); }
    int max_parallel() const noexcept { return max_parallel_; }

private:
    TranscriptEntry prepare(const AgentRequest& request);
    AgentResponse dispatch(TranscriptEntry entry);

    std::shared_ptr<Backend> backend_;
    std::shared_ptr<Transcript> transcript_;
    int max_parallel_;
    std::counting_semaphore<4096> slots_;
    std::atomic<std::size_t> calls_{0};
};

/// Thrown by response parsers; the message explains what was missing and is
/// fed back to the model in the correction prompt.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string correction_prompt(std::string_view original_user_prompt, std::string_view reason);

/// Issues `request` and parses the reply. On ParseError the request is sent
/// once more (per `reprompts`) with a format-correction note appended; if
/// that also fails, throws Error(failure). Backend errors propagate as-is.
template <class Parser>
auto ask_structured(AgentClient& client, AgentRequest request, Parser&& parse, ErrorCode failure, int reprompts = 1) {
    std::string reason;
    const std::string original = request.user_prompt;
    const std::string tag = request.request_tag;
    for (int attempt = 0; attempt <= reprompts; ++attempt) {
        if (attempt > 0) {
            request.user_prompt = correction_prompt(original, reason);
            request.request_tag = tag + "/retry-" + std::to_string(attempt);
        }
        const AgentResponse response = client.complete(request);
        try {
            return parse(response.text);
        } catch (const ParseError& e) {
            reason = e.what();
        }
    }
    throw Error(failure, request.role_name + ": " + reason);
}

}  // namespace gauntlet::backend
