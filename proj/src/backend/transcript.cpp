#include "gauntlet/backend/transcript.hpp"

#include <chrono>
#include <ctime>

#include "gauntlet/util/error.hpp"
#include "gauntlet/util/hash.hpp"

namespace gauntlet::backend {

std::string utc_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

json to_json(const TranscriptEntry& e) {
    json j{{"digest", e.digest},
           {"role_name", e.request.role_name},
           {"request", to_json(e.request)},
           {"response", e.response ? to_json(*e.response) : json(nullptr)},
           {"provenance", std::string(to_string(e.provenance))},
           {"timestamp", e.timestamp},
           {"seq", e.seq},
           {"issued_seq", e.issued_seq},
           {"completed_seq", e.completed_seq}};
    if (!e.error.empty()) j["error"] = e.error;
    return j;
}

TranscriptEntry transcript_entry_from_json(const json& j) {
    TranscriptEntry e;
    e.digest = j.at("digest").get<std::string>();
    e.request = request_from_json(j.at("request"));
    if (j.contains("response") && !j["response"].is_null()) e.response = response_from_json(j["response"]);
    e.provenance = provenance_from(j.value("provenance", std::string("live")));
    e.timestamp = j.value("timestamp", std::string());
    e.seq = j.value("seq", std::uint64_t{0});
    e.issued_seq = j.value("issued_seq", std::uint64_t{0});
    e.completed_seq = j.value("completed_seq", std::uint64_t{0});
    e.error = j.value("error", std::string());
    return e;
}

Transcript::Transcript() : Transcript(Options{}) {}

Transcript::Transcript(Options options) : options_(std::move(options)) {
    if (options_.sink) {
        if (options_.sink->has_parent_path()) std::filesystem::create_directories(options_.sink->parent_path());
        out_.open(*options_.sink, std::ios::out | std::ios::trunc);
        if (!out_) throw Error(ErrorCode::Io, "cannot open transcript " + options_.sink->string());
    }
}

void Transcript::append(TranscriptEntry entry) {
    const std::uint64_t fingerprint = hash::fnv1a64(canonical_request(entry.request));
    if (entry.digest.empty()) entry.digest = request_digest(entry.request);
    std::lock_guard lock(mu_);
    auto [it, inserted] = fingerprints_.emplace(entry.digest, fingerprint);
    if (!inserted && it->second != fingerprint) {
        throw Error(ErrorCode::DigestCollision, "digest " + entry.digest + " maps to two different requests");
    }
    entry.seq = ++next_seq_;
    if (entry.timestamp.empty()) entry.timestamp = utc_timestamp_now();
    if (out_.is_open()) {
        out_ << to_json(entry).dump() << '\n';
        out_.flush();
    }
    if (options_.keep_entries) entries_.push_back(std::move(entry));
}

std::vector<TranscriptEntry> Transcript::entries() const {
    std::lock_guard lock(mu_);
    return entries_;
}

std::size_t Transcript::size() const {
    std::lock_guard lock(mu_);
    return static_cast<std::size_t>(next_seq_);
}

std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read transcript " + path.string());
    std::vector<TranscriptEntry> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(transcript_entry_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::Io, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace gauntlet::backend
