#include "gauntlet/modelforge/sandbox.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/prctl.h>
#include <sys/resource.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <vector>

#include "gauntlet/util/error.hpp"

extern char** environ;

namespace gauntlet::modelforge {

namespace fs = std::filesystem;

std::string ExecutionReport::failure_reason() const {
    if (timed_out) return "timeout: exceeded the wall-clock limit";
    if (signal != 0) return "killed by signal " + std::to_string(signal);
    if (exit_code != 0) return "exit status " + std::to_string(exit_code);
    return {};
}

std::string ExecutionReport::log() const {
    std::string out = "exit_code: " + std::to_string(exit_code) + "\n";
    out += "signal: " + std::to_string(signal) + "\n";
    out += std::string("timed_out: ") + (timed_out ? "true" : "false") + "\n";
    out += "isolation: " + isolation + "\n";
    if (output_truncated) out += "note: output truncated\n";
    out += "--- stdout ---\n" + stdout_text;
    if (!stdout_text.empty() && stdout_text.back() != '\n') out += "\n";
    out += "--- stderr ---\n" + stderr_text;
    if (!stderr_text.empty() && stderr_text.back() != '\n') out += "\n";
    return out;
}

nlohmann::json to_json(const ExecutionReport& r) {
    return nlohmann::json{{"exit_code", r.exit_code},     {"signal", r.signal},
                          {"timed_out", r.timed_out},     {"output_truncated", r.output_truncated},
                          {"stdout", r.stdout_text},      {"stderr", r.stderr_text},
                          {"isolation", r.isolation},     {"success", r.success()}};
}

namespace {

// Landlock UAPI, declared locally because the installed headers predate the
// network and truncate rights.
#ifndef SYS_landlock_create_ruleset
#define SYS_landlock_create_ruleset 444
#define SYS_landlock_add_rule 445
#define SYS_landlock_restrict_self 446
#endif

struct LlRulesetAttr {
    std::uint64_t handled_access_fs;
    std::uint64_t handled_access_net;
};

struct __attribute__((packed)) LlPathBeneath {
    std::uint64_t allowed_access;
    std::int32_t parent_fd;
};

constexpr std::uint32_t kCreateRulesetVersion = 1U << 0;
constexpr int kRulePathBeneath = 1;

constexpr std::uint64_t kExecute = 1ULL << 0;
constexpr std::uint64_t kWriteFile = 1ULL << 1;
constexpr std::uint64_t kReadFile = 1ULL << 2;
constexpr std::uint64_t kReadDir = 1ULL << 3;
constexpr std::uint64_t kRemoveDir = 1ULL << 4;
constexpr std::uint64_t kRemoveFile = 1ULL << 5;
constexpr std::uint64_t kMakeChar = 1ULL << 6;
constexpr std::uint64_t kMakeDir = 1ULL << 7;
constexpr std::uint64_t kMakeReg = 1ULL << 8;
constexpr std::uint64_t kMakeSock = 1ULL << 9;
constexpr std::uint64_t kMakeFifo = 1ULL << 10;
constexpr std::uint64_t kMakeBlock = 1ULL << 11;
constexpr std::uint64_t kMakeSym = 1ULL << 12;
constexpr std::uint64_t kRefer = 1ULL << 13;     // ABI 2
constexpr std::uint64_t kTruncate = 1ULL << 14;  // ABI 3
constexpr std::uint64_t kNetBindTcp = 1ULL << 0;     // ABI 4
constexpr std::uint64_t kNetConnectTcp = 1ULL << 1;  // ABI 4

std::uint64_t write_rights(int abi) {
    std::uint64_t r = kWriteFile | kRemoveDir | kRemoveFile | kMakeChar | kMakeDir | kMakeReg | kMakeSock |
                      kMakeFifo | kMakeBlock | kMakeSym;
    if (abi >= 2) r |= kRefer;
    if (abi >= 3) r |= kTruncate;
    return r;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

std::string expand(std::string tmpl, const std::string& token, const std::string& value) {
    for (std::size_t pos = tmpl.find(token); pos != std::string::npos; pos = tmpl.find(token, pos + value.size())) {
        tmpl.replace(pos, token.size(), value);
    }
    return tmpl;
}

std::string first_word(const std::string& cmd) {
    std::size_t b = cmd.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    std::size_t e = cmd.find_first_of(" \t", b);
    return cmd.substr(b, e == std::string::npos ? std::string::npos : e - b);
}

bool on_path(const std::string& exe) {
    if (exe.find('/') != std::string::npos) return ::access(exe.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    std::string p = path ? path : "/usr/bin:/bin";
    std::size_t start = 0;
    while (start <= p.size()) {
        std::size_t end = p.find(':', start);
        std::string dir = p.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!dir.empty() && ::access((dir + "/" + exe).c_str(), X_OK) == 0) return true;
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return false;
}

[[noreturn]] void child_fail(int fd, const char* what) {
    const char* err = std::strerror(errno);
    (void)!::write(fd, "sandbox: ", 9);
    (void)!::write(fd, what, std::strlen(what));
    (void)!::write(fd, ": ", 2);
    (void)!::write(fd, err, std::strlen(err));
    (void)!::write(fd, "\n", 1);
    ::_exit(126);
}

// Child side: everything here must be async-signal-safe.
void confine(int abi, const char* work_dir, bool allow_network, int err_fd) {
    if (::prctl(PR_SET_NO_NEW_PRIVS, 1, 0, 0, 0) != 0) child_fail(err_fd, "no_new_privs");
    if (abi < 1) return;
    LlRulesetAttr attr{write_rights(abi), 0};
    std::size_t attr_size = sizeof(std::uint64_t);
    if (abi >= 4 && !allow_network) {
        attr.handled_access_net = kNetBindTcp | kNetConnectTcp;
        attr_size = sizeof(LlRulesetAttr);
    }
    const int ruleset = static_cast<int>(::syscall(SYS_landlock_create_ruleset, &attr, attr_size, 0U));
    if (ruleset < 0) child_fail(err_fd, "landlock_create_ruleset");
    const int dir_fd = ::open(work_dir, O_PATH | O_CLOEXEC | O_DIRECTORY);
    if (dir_fd < 0) child_fail(err_fd, "open work dir");
    LlPathBeneath beneath{write_rights(abi), dir_fd};
    if (::syscall(SYS_landlock_add_rule, ruleset, kRulePathBeneath, &beneath, 0U) != 0) {
        child_fail(err_fd, "landlock_add_rule");
    }
    const int null_fd = ::open("/dev/null", O_PATH | O_CLOEXEC);
    if (null_fd >= 0) {
        LlPathBeneath dev_null{kWriteFile | (abi >= 3 ? kTruncate : 0), null_fd};
        (void)::syscall(SYS_landlock_add_rule, ruleset, kRulePathBeneath, &dev_null, 0U);
    }
    if (::syscall(SYS_landlock_restrict_self, ruleset, 0U) != 0) child_fail(err_fd, "landlock_restrict_self");
}

}  // namespace

int landlock_abi() {
    static const int abi = [] {
        const long v = ::syscall(SYS_landlock_create_ruleset, nullptr, 0, kCreateRulesetVersion);
        return v < 0 ? 0 : static_cast<int>(v);
    }();
    return abi;
}

ProcessSandbox::ProcessSandbox(ProcessSandboxConfig config) : config_(std::move(config)) {
    if (config_.command_template.find("{program}") == std::string::npos) {
        throw Error(ErrorCode::Configuration, "sandbox command template must contain {program}");
    }
    if (config_.program_name.empty() || config_.program_name.find('/') != std::string::npos) {
        throw Error(ErrorCode::Configuration, "sandbox program name must be a plain file name");
    }
}

void ProcessSandbox::preflight() const {
    const auto exe = first_word(config_.command_template);
    if (exe.empty() || !on_path(exe)) {
        throw Error(ErrorCode::SandboxFailed, "sandbox command '" + exe + "' not found or not executable");
    }
    if (::access("/bin/sh", X_OK) != 0) throw Error(ErrorCode::SandboxFailed, "/bin/sh is not available");
}

ExecutionReport ProcessSandbox::run(const std::string& program, const fs::path& work_dir_in) {
    std::error_code ec;
    fs::create_directories(work_dir_in, ec);
    if (ec) throw Error(ErrorCode::SandboxFailed, "cannot create " + work_dir_in.string() + ": " + ec.message());
    const fs::path work_dir = fs::canonical(work_dir_in);
    const fs::path program_path = work_dir / config_.program_name;
    {
        std::ofstream out(program_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::SandboxFailed, "cannot write " + program_path.string());
        out << program;
    }

    std::string command = expand(config_.command_template, "{program}", shell_quote(program_path.string()));
    command = expand(command, "{dir}", shell_quote(work_dir.string()));

    // Everything the child needs is prepared before fork.
    const std::string dir_s = work_dir.string();
    std::vector<std::string> env_s = {"HOME=" + dir_s, "TMPDIR=" + dir_s, "PYTHONDONTWRITEBYTECODE=1",
                                      "LC_ALL=C.UTF-8"};
    if (const char* path = std::getenv("PATH")) env_s.push_back(std::string("PATH=") + path);
    else env_s.push_back("PATH=/usr/local/bin:/usr/bin:/bin");
    std::vector<char*> envp;
    for (auto& e : env_s) envp.push_back(e.data());
    envp.push_back(nullptr);
    std::string sh = "/bin/sh", dash_c = "-c";
    char* argv[] = {sh.data(), dash_c.data(), command.data(), nullptr};

    const int abi = landlock_abi();
    ExecutionReport report;
    report.isolation = abi >= 1 ? "landlock-v" + std::to_string(abi) : "rlimits-only";
    const auto limits = config_.limits;
    const rlim_t cpu_secs = static_cast<rlim_t>(limits.wall_clock.count() / 1000 + 2);

    int out_pipe[2], err_pipe[2];
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw Error(ErrorCode::SandboxFailed, "pipe failed");
    if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        throw Error(ErrorCode::SandboxFailed, "pipe failed");
    }

    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
        throw Error(ErrorCode::SandboxFailed, std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(err_pipe[1], STDERR_FILENO);
        const int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
        if (::chdir(dir_s.c_str()) != 0) child_fail(STDERR_FILENO, "chdir");
        rlimit mem{limits.memory_bytes, limits.memory_bytes};
        ::setrlimit(RLIMIT_AS, &mem);
        rlimit cpu{cpu_secs, cpu_secs};
        ::setrlimit(RLIMIT_CPU, &cpu);
        rlimit core{0, 0};
        ::setrlimit(RLIMIT_CORE, &core);
        confine(abi, dir_s.c_str(), limits.allow_network, STDERR_FILENO);
        ::execve(argv[0], argv, envp.data());
        child_fail(STDERR_FILENO, "execve");
    }
    ::setpgid(pid, pid);
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);

    const auto deadline = std::chrono::steady_clock::now() + limits.wall_clock;
    pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    std::string* sinks[2] = {&report.stdout_text, &report.stderr_text};
    int open_streams = 2;
    char buf[8192];
    while (open_streams > 0) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            report.timed_out = true;
            ::kill(-pid, SIGKILL);
            break;
        }
        const int wait_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1);
        const int rc = ::poll(fds, 2, std::min(wait_ms, 1000));
        if (rc < 0 && errno != EINTR) break;
        for (int i = 0; i < 2; ++i) {
            if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            const ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
            if (n <= 0) {
                ::close(fds[i].fd);
                fds[i].fd = -1;
                --open_streams;
                continue;
            }
            auto& sink = *sinks[i];
            const std::size_t room = limits.max_output_bytes > sink.size() ? limits.max_output_bytes - sink.size() : 0;
            if (static_cast<std::size_t>(n) > room) report.output_truncated = true;
            sink.append(buf, std::min(room, static_cast<std::size_t>(n)));
        }
    }
    for (auto& f : fds) {
        if (f.fd >= 0) ::close(f.fd);
    }

    int status = 0;
    while (true) {
        const pid_t w = ::waitpid(pid, &status, report.timed_out ? 0 : WNOHANG);
        if (w == pid) break;
        if (w < 0 && errno != EINTR) break;
        if (w == 0) {
            // Streams closed but the child lingers: enforce the deadline.
            if (std::chrono::steady_clock::now() >= deadline) {
                report.timed_out = true;
                ::kill(-pid, SIGKILL);
            } else {
                ::usleep(2000);
            }
        }
    }
    ::kill(-pid, SIGKILL);  // reap any leftover group members
    if (WIFEXITED(status)) {
        report.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        report.signal = WTERMSIG(status);
        report.exit_code = -1;
    }
    return report;
}

}  // namespace gauntlet::modelforge
