#include "gauntlet/store/run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/util/error.hpp"

namespace gauntlet::store {

namespace fs = std::filesystem;

std::string_view to_string(PipelineKind p) noexcept {
    switch (p) {
        case PipelineKind::Ideation: return "ideation";
        case PipelineKind::Panel: return "panel";
        case PipelineKind::Forge: return "forge";
        case PipelineKind::Funnel: return "funnel";
    }
    return "?";
}

std::string_view to_string(RunStatus s) noexcept {
    switch (s) {
        case RunStatus::Complete: return "complete";
        case RunStatus::Partial: return "partial";
        case RunStatus::Failed: return "failed";
    }
    return "?";
}

PipelineKind pipeline_from(std::string_view s) {
    for (auto p : {PipelineKind::Ideation, PipelineKind::Panel, PipelineKind::Forge, PipelineKind::Funnel}) {
        if (to_string(p) == s) return p;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown pipeline '" + std::string(s) + "'");
}

RunStatus run_status_from(std::string_view s) {
    for (auto v : {RunStatus::Complete, RunStatus::Partial, RunStatus::Failed}) {
        if (to_string(v) == s) return v;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown run status '" + std::string(s) + "'");
}

json to_json(const RunRecord& r) {
    return json{{"run_id", r.run_id},
                {"pipeline", to_string(r.pipeline)},
                {"config", r.config},
                {"transcript", r.transcript},
                {"manifest", r.manifest},
                {"status", to_string(r.status)}};
}

RunRecord run_record_from_json(const json& j) {
    require_known_keys(j, {"run_id", "pipeline", "config", "transcript", "manifest", "status"}, "run record");
    try {
        RunRecord r;
        r.run_id = j.at("run_id").get<std::string>();
        r.pipeline = pipeline_from(j.at("pipeline").get<std::string>());
        r.config = j.value("config", json::object());
        r.transcript = j.value("transcript", std::string{});
        r.manifest = j.value("manifest", std::vector<std::string>{});
        r.status = run_status_from(j.at("status").get<std::string>());
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed run record: ") + e.what());
    }
}

std::string make_run_id() {
    static std::mutex mu;
    static long long last_ms = 0;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
    if (ms <= last_ms) ms = last_ms + 1;
    last_ms = ms;
    const std::time_t secs = static_cast<std::time_t>(ms / 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%S", &tm);
    static constexpr char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string suffix;
    std::uniform_int_distribution<int> pick(0, 35);
    for (int i = 0; i < 4; ++i) suffix += alphabet[pick(rng)];
    char out[64];
    std::snprintf(out, sizeof out, "%s%03lld-%s", stamp, ms % 1000, suffix.c_str());
    return out;
}

void LocalFilesystem::create_directories(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + p.string() + ": " + ec.message());
}

void LocalFilesystem::write_file(const fs::path& p, std::string_view content) {
    if (p.has_parent_path()) create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

bool LocalFilesystem::exists(const fs::path& p) const { return fs::exists(p); }

std::string LocalFilesystem::read_file(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LocalFilesystem& local_filesystem() {
    static LocalFilesystem instance;
    return instance;
}

fs::path run_directory(const fs::path& root, std::string_view run_id) { return root / "runs" / std::string(run_id); }

fs::path persist_run(const fs::path& root, RunRecord& record, const ArtifactSet& artifacts, Filesystem& fsys) {
    if (record.run_id.empty()) throw Error(ErrorCode::InvalidArgument, "run record has no run_id");
    const fs::path dir = run_directory(root, record.run_id);
    if (fsys.exists(dir / kRecordFile)) {
        throw Error(ErrorCode::DuplicateRun, "run " + record.run_id + " already persisted");
    }
    try {
        fsys.create_directories(dir);
        std::set<std::string> manifest(record.manifest.begin(), record.manifest.end());
        for (const auto& [rel, content] : artifacts) {
            fsys.write_file(dir / rel, content);
            manifest.insert(rel);
        }
        if (!record.transcript.empty()) manifest.insert(record.transcript);
        for (const auto& rel : manifest) {
            if (!fsys.exists(dir / rel)) throw Error(ErrorCode::Io, "manifest entry missing: " + rel);
        }
        record.manifest.assign(manifest.begin(), manifest.end());
        fsys.write_file(dir / kRecordFile, to_json(record).dump(2) + "\n");
        fsys.write_file(dir / kCompleteMarker, std::string(to_string(record.status)) + "\n");
    } catch (const Error& e) {
        try {
            fsys.write_file(dir / kPartialMarker, e.what() + std::string("\n"));
        } catch (...) {
        }
        throw Error(ErrorCode::PersistFailed, "run " + record.run_id + ": " + e.what());
    }
    return dir;
}

LoadedRun load_run(const fs::path& root, std::string_view run_id, const Filesystem& fsys) {
    const fs::path dir = run_directory(root, run_id);
    if (!fsys.exists(dir / kRecordFile)) throw Error(ErrorCode::Io, "no run record for " + std::string(run_id));
    json j = json::parse(fsys.read_file(dir / kRecordFile), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::InvalidArgument, "run.json of " + std::string(run_id) + " is not JSON");
    LoadedRun out;
    out.record = run_record_from_json(j);
    out.completed = fsys.exists(dir / kCompleteMarker);
    return out;
}

std::vector<RunListing> list_runs(const fs::path& root) {
    std::vector<RunListing> out;
    const fs::path runs = root / "runs";
    if (!fs::is_directory(runs)) return out;
    for (const auto& de : fs::directory_iterator(runs)) {
        if (!de.is_directory()) continue;
        RunListing item;
        item.run_id = de.path().filename().string();
        item.completed = fs::exists(de.path() / kCompleteMarker);
        try {
            auto loaded = load_run(root, item.run_id);
            item.pipeline = loaded.record.pipeline;
            if (item.completed) item.status = loaded.record.status;
        } catch (const Error&) {
            item.completed = false;
        }
        if (!item.completed) item.status = RunStatus::Partial;
        out.push_back(std::move(item));
    }
    std::sort(out.begin(), out.end(), [](const RunListing& a, const RunListing& b) { return a.run_id < b.run_id; });
    return out;
}

}  // namespace gauntlet::store
