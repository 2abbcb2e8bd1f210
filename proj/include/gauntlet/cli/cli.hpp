#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "gauntlet/backend/client.hpp"
#include "gauntlet/backend/mock.hpp"
#include "gauntlet/funnel/funnel.hpp"
#include "gauntlet/ideation/ideation.hpp"
#include "gauntlet/modelforge/forge.hpp"
#include "gauntlet/modelforge/sandbox.hpp"
#include "gauntlet/store/report.hpp"

namespace gauntlet::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// Stable exit-code contract.
inline constexpr int kExitComplete = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 2;

struct SandboxSettings {
    std::string command = "python3 {program}";
    std::string program_name = "model.py";
    int timeout_s = 120;
    std::size_t memory_mb = 1024;
    std::size_t max_output_kb = 1024;

    modelforge::ProcessSandboxConfig to_process_config() const;
};

struct CliConfig {
    backend::BackendConfig backend;
    std::optional<fs::path> mock_script;
    std::optional<fs::path> replay_transcript;
    std::optional<fs::path> corpus;
    fs::path out = "gauntlet-out";

    ideation::IdeationConfig ideation;
    std::optional<fs::path> feedback_dir;
    /// Runs the review panel over each winning proposal.
    bool ideation_synthesis = false;

    std::optional<fs::path> personas;

    modelforge::ForgeConfig forge;
    SandboxSettings sandbox;

    funnel::FunnelConfig funnel;
    /// Domain keyword -> model program run by the tier-2 hook.
    std::map<std::string, fs::path> analytical_models;

    /// Canonical JSON form; stored in every run record.
    json snapshot() const;
    /// Every referenced path exists and every section is internally valid.
    void validate() const;
};

/// Strict: unknown keys anywhere are rejected. Relative paths resolve against
/// `base_dir`.
CliConfig config_from_json(const json& j, const fs::path& base_dir = {});
/// Parses and validates the file.
CliConfig load_config(const fs::path& path);

struct Overrides {
    std::optional<std::string> backend;
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> out;
    std::optional<fs::path> corpus;
    std::optional<fs::path> mock_script;
    std::optional<fs::path> transcript;
    std::optional<fs::path> feedback;
};

/// Flags win over the configuration file.
void apply_overrides(CliConfig& config, const Overrides& o);

/// Well-formed replies for every agent role, so each pipeline runs end to end
/// with the mock backend and no script of its own.
const backend::MockScript& default_mock_script();

/// Streams and seams shared by the commands.
struct Io {
    std::ostream& out;
    std::ostream& err;
    /// Replaces backend construction (tests instrument calls with it).
    std::function<std::shared_ptr<backend::Backend>(const CliConfig&)> backend_factory;
    /// Replaces the process sandbox for forge and funnel.
    std::function<std::unique_ptr<modelforge::Sandbox>(const CliConfig&)> sandbox_factory;
};

struct CommandResult {
    int exit_code = kExitError;
    std::string run_id;
    fs::path run_dir;
};

CommandResult cmd_ideate(const CliConfig& config, const std::optional<std::string>& paper, Io& io);
CommandResult cmd_review(const CliConfig& config, const std::string& paper, Io& io);
CommandResult cmd_forge(const CliConfig& config, const std::string& paper, Io& io);
CommandResult cmd_funnel(const CliConfig& config, const fs::path& candidates, Io& io);
int cmd_corpus_list(const CliConfig& config, Io& io);
int cmd_corpus_validate(const CliConfig& config, Io& io);
/// Re-emits a stored run's report. A run without its completion marker
/// exits 2.
int cmd_report(const CliConfig& config, const std::string& run_id, store::ReportFormat format, Io& io);
int cmd_runs(const CliConfig& config, Io& io);

}  // namespace gauntlet::cli
