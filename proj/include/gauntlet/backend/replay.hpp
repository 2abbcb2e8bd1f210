#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "gauntlet/backend/client.hpp"

namespace gauntlet::backend {

/// Serves responses recorded in a transcript. Lookup is by request digest;
/// when one digest was recorded with several different responses, the entry
/// with the same request_tag is preferred, then recording order.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const std::vector<TranscriptEntry>& recorded);
    static std::shared_ptr<ReplayBackend> from_file(const std::filesystem::path& path);

    AgentResponse complete(const AgentRequest& request) override;
    Provenance provenance() const noexcept override { return Provenance::Replay; }

    std::size_t recorded_digests() const noexcept { return by_digest_.size(); }

private:
    struct Recorded {
        std::string tag;
        AgentResponse response;
    };
    struct Slot {
        std::vector<Recorded> entries;
        std::size_t cursor = 0;
    };
    std::mutex mu_;
    std::map<std::string, Slot> by_digest_;
};

}  // namespace gauntlet::backend
