#include "gauntlet/backend/client.hpp"

#include "gauntlet/util/parallel.hpp"

namespace gauntlet::backend {

AgentClient::AgentClient(std::shared_ptr<Backend> backend, std::shared_ptr<Transcript> transcript, int max_parallel)
    : backend_(std::move(backend)),
      transcript_(transcript ? std::move(transcript) : std::make_shared<Transcript>()),
      max_parallel_(max_parallel),
      slots_(max_parallel) {
    if (!backend_) throw Error(ErrorCode::Configuration, "agent client without a backend");
    if (max_parallel < 1 || max_parallel > 4096) throw Error(ErrorCode::Configuration, "max_parallel out of range");
}

TranscriptEntry AgentClient::prepare(const AgentRequest& request) {
    request.validate();
    TranscriptEntry entry;
    entry.request = request;
    entry.digest = request_digest(request);
    entry.provenance = backend_->provenance();
    ++calls_;
    return entry;
}

AgentResponse AgentClient::dispatch(TranscriptEntry entry) {
    const AgentRequest& request = entry.request;
    slots_.acquire();
    if (entry.issued_seq == 0) entry.issued_seq = transcript_->tick();
    try {
        AgentResponse response = backend_->complete(request);
        entry.completed_seq = transcript_->tick();
        slots_.release();
        response.provenance = backend_->provenance();
        if (response.text.empty()) {
            throw Error(ErrorCode::ProviderError, "empty response for role '" + request.role_name + "'");
        }
        entry.response = response;
        transcript_->append(std::move(entry));
        return response;
    } catch (const Error& e) {
        if (entry.completed_seq == 0) {
            entry.completed_seq = transcript_->tick();
            slots_.release();
        }
        if (e.code() == ErrorCode::DigestCollision) throw;
        entry.response.reset();
        entry.error = e.what();
        transcript_->append(std::move(entry));
        throw;
    } catch (...) {
        if (entry.completed_seq == 0) {
            entry.completed_seq = transcript_->tick();
            slots_.release();
        }
        throw;
    }
}

AgentResponse AgentClient::complete(const AgentRequest& request) { return dispatch(prepare(request)); }

std::vector<AgentResponse> AgentClient::complete_all(const std::vector<AgentRequest>& requests) {
    std::vector<TranscriptEntry> entries;
    entries.reserve(requests.size());
    for (const auto& r : requests) entries.push_back(prepare(r));
    // Every request counts as issued before any of them is dispatched.
    for (auto& e : entries) e.issued_seq = transcript_->tick();
    return parallel_map(entries.size(), entries.size(), [&](std::size_t i) { return dispatch(std::move(entries[i])); });
}

std::string correction_prompt(std::string_view original_user_prompt, std::string_view reason) {
    std::string out(original_user_prompt);
    out += "\n\n[FORMAT CORRECTION]\nYour previous reply could not be used: ";
    out += reason;
    out += "\nReply again from scratch, following the required output format exactly.";
    return out;
}

}  // namespace gauntlet::backend
