#include "gauntlet/util/error.hpp"

namespace gauntlet {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::Precondition: return "precondition-violation";
        case ErrorCode::Configuration: return "configuration-error";
        case ErrorCode::BackendUnavailable: return "backend-unavailable";
        case ErrorCode::ReplayMiss: return "replay-miss";
        case ErrorCode::ProviderError: return "provider-error";
        case ErrorCode::DigestCollision: return "digest-collision";
        case ErrorCode::ExtractionFailed: return "extraction-failed";
        case ErrorCode::QcFailed: return "qc-failed";
        case ErrorCode::GenerationFailed: return "generation-failed";
        case ErrorCode::ValidationFailed: return "validation-failed";
        case ErrorCode::TopicDetectionFailed: return "topic-detection-failed";
        case ErrorCode::ReviewFailed: return "review-failed";
        case ErrorCode::SynthesisFailed: return "synthesis-failed";
        case ErrorCode::Phase1Failed: return "phase1-failed";
        case ErrorCode::Phase2Failed: return "phase2-failed";
        case ErrorCode::Phase3Failed: return "phase3-failed";
        case ErrorCode::ForgeFailed: return "forge-failed";
        case ErrorCode::SandboxFailed: return "sandbox-failed";
        case ErrorCode::CorpusError: return "corpus-error";
        case ErrorCode::DuplicateRun: return "duplicate-run";
        case ErrorCode::PersistFailed: return "persist-failed";
        case ErrorCode::Io: return "io-error";
    }
    return "unknown";
}

}  // namespace gauntlet
