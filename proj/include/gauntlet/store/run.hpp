#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gauntlet::store {

using json = nlohmann::json;

enum class PipelineKind { Ideation, Panel, Forge, Funnel };
enum class RunStatus { Complete, Partial, Failed };

std::string_view to_string(PipelineKind p) noexcept;
std::string_view to_string(RunStatus s) noexcept;
PipelineKind pipeline_from(std::string_view s);
RunStatus run_status_from(std::string_view s);

struct RunRecord {
    std::string run_id;
    PipelineKind pipeline = PipelineKind::Ideation;
    json config = json::object();
    /// Transcript path relative to the run directory.
    std::string transcript;
    /// Every file of the run, relative to the run directory.
    std::vector<std::string> manifest;
    RunStatus status = RunStatus::Complete;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

json to_json(const RunRecord& r);
RunRecord run_record_from_json(const json& j);

/// Zero-padded UTC timestamp with millisecond precision plus a 4-character
/// random suffix, e.g. "20261014T033100123-k3f9". Strictly increasing within
/// a process, so lexicographic order is creation order.
std::string make_run_id();

/// Narrow file-system surface so persistence can be observed and broken in tests.
class Filesystem {
public:
    virtual ~Filesystem() = default;
    virtual void create_directories(const std::filesystem::path& p) = 0;
    virtual void write_file(const std::filesystem::path& p, std::string_view content) = 0;
    virtual bool exists(const std::filesystem::path& p) const = 0;
    virtual std::string read_file(const std::filesystem::path& p) const = 0;
};

/// Writes through a temporary file and rename, so a file is either absent or whole.
class LocalFilesystem final : public Filesystem {
public:
    void create_directories(const std::filesystem::path& p) override;
    void write_file(const std::filesystem::path& p, std::string_view content) override;
    bool exists(const std::filesystem::path& p) const override;
    std::string read_file(const std::filesystem::path& p) const override;
};

LocalFilesystem& local_filesystem();

inline constexpr std::string_view kCompleteMarker = "COMPLETE";
inline constexpr std::string_view kPartialMarker = "PARTIAL";
inline constexpr std::string_view kRecordFile = "run.json";

/// Relative path -> content.
using ArtifactSet = std::map<std::string, std::string>;

std::filesystem::path run_directory(const std::filesystem::path& root, std::string_view run_id);

/// Writes artifacts, then run.json, then the completion marker, in that order.
/// The stored manifest is the union of record.manifest and the artifact paths;
/// every manifest entry must exist before the marker is written. A run whose
/// run.json already exists is rejected as a duplicate. Any write failure
/// leaves a PARTIAL marker (best effort) and raises persist-failed.
std::filesystem::path persist_run(const std::filesystem::path& root, RunRecord& record, const ArtifactSet& artifacts,
                                  Filesystem& fs = local_filesystem());

struct LoadedRun {
    RunRecord record;
    bool completed = false;
};

LoadedRun load_run(const std::filesystem::path& root, std::string_view run_id, const Filesystem& fs = local_filesystem());

struct RunListing {
    std::string run_id;
    std::optional<PipelineKind> pipeline;
    /// Recorded status when the completion marker exists; Partial otherwise.
    RunStatus status = RunStatus::Partial;
    bool completed = false;
};

std::vector<RunListing> list_runs(const std::filesystem::path& root);

}  // namespace gauntlet::store
