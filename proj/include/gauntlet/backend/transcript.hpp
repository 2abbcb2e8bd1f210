#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gauntlet/backend/request.hpp"

namespace gauntlet::backend {

struct TranscriptEntry {
    std::uint64_t seq = 0;
    /// Logical-clock ticks taken when the call was issued and when it returned.
    std::uint64_t issued_seq = 0;
    std::uint64_t completed_seq = 0;
    std::string digest;
    AgentRequest request;
    std::optional<AgentResponse> response;
    std::string error;
    Provenance provenance = Provenance::Mock;
    std::string timestamp;
};

json to_json(const TranscriptEntry& e);
TranscriptEntry transcript_entry_from_json(const json& j);

/// Append-only log of agent calls, one JSON object per line when backed by a
/// file. Safe for concurrent appends. Digests are collision-checked: two
/// different canonical requests mapping to one digest is a hard error.
class Transcript {
public:
    struct Options {
        std::optional<std::filesystem::path> sink;
        bool keep_entries = true;
    };

    Transcript();
    explicit Transcript(Options options);

    std::uint64_t tick() noexcept { return clock_.fetch_add(1) + 1; }

    void append(TranscriptEntry entry);

    std::vector<TranscriptEntry> entries() const;
    std::size_t size() const;
    const std::optional<std::filesystem::path>& sink() const noexcept { return options_.sink; }

private:
    Options options_;
    mutable std::mutex mu_;
    std::atomic<std::uint64_t> clock_{0};
    std::uint64_t next_seq_ = 0;
    std::vector<TranscriptEntry> entries_;
    std::unordered_map<std::string, std::uint64_t> fingerprints_;
    std::ofstream out_;
};

/// Reads a JSONL transcript. Throws Error(Io) naming the line on malformed input.
std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& path);

std::string utc_timestamp_now();

}  // namespace gauntlet::backend
