#include "gauntlet/backend/factory.hpp"

#include "gauntlet/backend/http.hpp"
#include "gauntlet/backend/replay.hpp"

namespace gauntlet::backend {

std::shared_ptr<Backend> make_backend(const BackendConfig& config, const BackendSources& sources) {
    config.validate();
    switch (config.kind) {
        case BackendKind::Http:
            return std::make_shared<HttpBackend>(config);
        case BackendKind::Mock:
            return std::make_shared<MockBackend>(sources.mock_script, config.seed.value_or(0), config.model_id);
        case BackendKind::Replay:
            if (!sources.replay_transcript) throw Error(ErrorCode::Configuration, "replay backend needs a transcript");
            if (!std::filesystem::exists(*sources.replay_transcript)) {
                throw Error(ErrorCode::Configuration, "replay transcript not found: " + sources.replay_transcript->string());
            }
            return ReplayBackend::from_file(*sources.replay_transcript);
    }
    throw Error(ErrorCode::Configuration, "unsupported backend kind");
}

}  // namespace gauntlet::backend
