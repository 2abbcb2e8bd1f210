#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>

#include <json.hpp>

namespace gauntlet::modelforge {

struct SandboxLimits {
    std::chrono::milliseconds wall_clock{120'000};
    std::size_t memory_bytes = std::size_t{1} << 30;
    std::size_t max_output_bytes = std::size_t{1} << 20;  // per stream
    bool allow_network = false;
};

struct ExecutionReport {
    int exit_code = -1;  // -1 when killed by a signal
    int signal = 0;
    bool timed_out = false;
    bool output_truncated = false;
    std::string stdout_text;
    std::string stderr_text;
    /// How the child was confined, e.g. "landlock-v4" or "rlimits-only".
    std::string isolation;

    bool success() const noexcept { return !timed_out && signal == 0 && exit_code == 0; }
    /// Human-readable cause when !success().
    std::string failure_reason() const;
    /// Deterministic log text: status lines followed by both streams.
    std::string log() const;
};

nlohmann::json to_json(const ExecutionReport& r);

class Sandbox {
public:
    virtual ~Sandbox() = default;
    /// Throws Error(SandboxFailed) when the sandbox cannot run anything.
    virtual void preflight() const {}
    /// Runs `program` with `work_dir` as its only writable location.
    virtual ExecutionReport run(const std::string& program, const std::filesystem::path& work_dir) = 0;
};

struct ProcessSandboxConfig {
    /// Run through /bin/sh -c. {program} and {dir} expand to quoted paths.
    std::string command_template = "python3 {program}";
    std::string program_name = "model.py";
    SandboxLimits limits;
};

/// Forks a child with rlimits, its own process group and, where the kernel
/// supports it, a Landlock domain that denies writes outside work_dir and
/// TCP bind/connect.
class ProcessSandbox final : public Sandbox {
public:
    explicit ProcessSandbox(ProcessSandboxConfig config = {});
    void preflight() const override;
    ExecutionReport run(const std::string& program, const std::filesystem::path& work_dir) override;
    const ProcessSandboxConfig& config() const noexcept { return config_; }

private:
    ProcessSandboxConfig config_;
};

/// In-process stand-in, for tests and dry runs.
class FunctionSandbox final : public Sandbox {
public:
    using Fn = std::function<ExecutionReport(const std::string& program, const std::filesystem::path& work_dir)>;
    explicit FunctionSandbox(Fn fn) : fn_(std::move(fn)) {}
    ExecutionReport run(const std::string& program, const std::filesystem::path& work_dir) override {
        return fn_(program, work_dir);
    }

private:
    Fn fn_;
};

/// Landlock ABI version of the running kernel; 0 when unavailable.
int landlock_abi();

}  // namespace gauntlet::modelforge
