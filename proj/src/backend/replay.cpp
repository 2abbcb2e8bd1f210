#include "gauntlet/backend/replay.hpp"

#include <algorithm>

namespace gauntlet::backend {

ReplayBackend::ReplayBackend(const std::vector<TranscriptEntry>& recorded) {
    for (const auto& e : recorded) {
        if (!e.response || !e.error.empty()) continue;
        by_digest_[e.digest].entries.push_back({e.request.request_tag, *e.response});
    }
}

std::shared_ptr<ReplayBackend> ReplayBackend::from_file(const std::filesystem::path& path) {
    return std::make_shared<ReplayBackend>(load_transcript(path));
}

AgentResponse ReplayBackend::complete(const AgentRequest& request) {
    const std::string digest = request_digest(request);
    std::lock_guard lock(mu_);
    auto it = by_digest_.find(digest);
    if (it == by_digest_.end()) {
        throw Error(ErrorCode::ReplayMiss, "no recorded response for digest " + digest + " (role '" + request.role_name + "')");
    }
    Slot& slot = it->second;
    const auto& entries = slot.entries;
    const bool uniform = std::all_of(entries.begin(), entries.end(),
                                     [&](const Recorded& r) { return r.response.text == entries.front().response.text; });
    AgentResponse out;
    if (uniform) {
        out = entries.front().response;
    } else {
        auto tagged = std::find_if(entries.begin(), entries.end(),
                                   [&](const Recorded& r) { return r.tag == request.request_tag; });
        if (tagged != entries.end()) {
            out = tagged->response;
        } else {
            out = entries[std::min(slot.cursor, entries.size() - 1)].response;
            ++slot.cursor;
        }
    }
    out.provenance = Provenance::Replay;
    return out;
}

}  // namespace gauntlet::backend
