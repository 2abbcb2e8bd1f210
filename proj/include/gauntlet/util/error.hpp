#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gauntlet {

enum class ErrorCode {
    InvalidArgument,
    Precondition,
    Configuration,
    BackendUnavailable,
    ReplayMiss,
    ProviderError,
    DigestCollision,
    ExtractionFailed,
    QcFailed,
    GenerationFailed,
    ValidationFailed,
    TopicDetectionFailed,
    ReviewFailed,
    SynthesisFailed,
    Phase1Failed,
    Phase2Failed,
    Phase3Failed,
    ForgeFailed,
    SandboxFailed,
    CorpusError,
    DuplicateRun,
    PersistFailed,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type used across the engine. The code identifies the
/// failure class named in each operation's contract; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace gauntlet
