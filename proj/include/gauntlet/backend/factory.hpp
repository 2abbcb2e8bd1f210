#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "gauntlet/backend/client.hpp"
#include "gauntlet/backend/mock.hpp"

namespace gauntlet::backend {

struct BackendSources {
    /// Rules for the mock backend.
    MockScript mock_script;
    /// Recorded transcript for the replay backend.
    std::optional<std::filesystem::path> replay_transcript;
};

/// Builds the backend named by config.kind. Throws Error(Configuration) when
/// the config is invalid or a replay source is missing.
std::shared_ptr<Backend> make_backend(const BackendConfig& config, const BackendSources& sources);

}  // namespace gauntlet::backend
