#include <fstream>
#include <set>

#include "gauntlet/cli/cli.hpp"
#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/panel/panel.hpp"

namespace gauntlet::cli {

namespace {

fs::path resolve(const json& v, const fs::path& base) {
    fs::path p = v.get<std::string>();
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

std::optional<fs::path> opt_path(const json& j, std::string_view key, const fs::path& base) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return resolve(j.at(key), base);
}

void require_object(const json& j, std::string_view where) {
    if (!j.is_object()) throw Error(ErrorCode::Configuration, std::string(where) + " must be an object");
}

void parse_backend(const json& j, CliConfig& c, const fs::path& base) {
    require_object(j, "backend");
    require_known_keys(j,
                       {"kind", "base_url", "model_id", "max_parallel", "retry_limit", "backoff_ms", "timeout_s",
                        "seed", "mock_script", "replay_transcript"},
                       "backend");
    auto& b = c.backend;
    if (j.contains("kind")) b.kind = backend::backend_kind_from(j.at("kind").get<std::string>());
    if (j.contains("base_url") && !j.at("base_url").is_null()) b.base_url = j.at("base_url").get<std::string>();
    b.model_id = j.value("model_id", b.kind == backend::BackendKind::Mock ? std::string("mock") : b.model_id);
    b.max_parallel = j.value("max_parallel", b.max_parallel);
    b.retry_limit = j.value("retry_limit", b.retry_limit);
    b.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", static_cast<std::int64_t>(b.backoff_base.count())));
    b.request_timeout = std::chrono::seconds(j.value("timeout_s", static_cast<std::int64_t>(b.request_timeout.count())));
    if (j.contains("seed") && !j.at("seed").is_null()) b.seed = j.at("seed").get<std::uint64_t>();
    c.mock_script = opt_path(j, "mock_script", base);
    c.replay_transcript = opt_path(j, "replay_transcript", base);
}

void parse_ideation(const json& j, CliConfig& c, const fs::path& base) {
    require_object(j, "ideation");
    require_known_keys(j,
                       {"runs_per_paper", "n_proposals", "temp_lo", "temp_hi", "generality_threshold", "leakage_ngram",
                        "leakage_judge", "expand", "recursion_depth", "domain_prompts", "feedback_dir", "synthesis"},
                       "ideation");
    auto& i = c.ideation;
    i.runs_per_paper = j.value("runs_per_paper", i.runs_per_paper);
    i.n_proposals = j.value("n_proposals", i.n_proposals);
    i.temp_lo = j.value("temp_lo", i.temp_lo);
    i.temp_hi = j.value("temp_hi", i.temp_hi);
    i.generality_threshold = j.value("generality_threshold", i.generality_threshold);
    i.leakage.ngram = j.value("leakage_ngram", i.leakage.ngram);
    i.leakage.use_judge = j.value("leakage_judge", i.leakage.use_judge);
    i.expand = j.value("expand", i.expand);
    i.recursion_depth = j.value("recursion_depth", i.recursion_depth);
    i.architect.domain_prompts = j.value("domain_prompts", i.architect.domain_prompts);
    c.feedback_dir = opt_path(j, "feedback_dir", base);
    c.ideation_synthesis = j.value("synthesis", c.ideation_synthesis);
}

void parse_forge(const json& j, CliConfig& c) {
    require_object(j, "forge");
    require_known_keys(j, {"runs", "concurrent_runs", "continue_unapproved", "sandbox"}, "forge");
    c.forge.runs = j.value("runs", c.forge.runs);
    c.forge.concurrent_runs = j.value("concurrent_runs", c.forge.concurrent_runs);
    c.forge.continue_unapproved = j.value("continue_unapproved", c.forge.continue_unapproved);
    if (j.contains("sandbox")) {
        const auto& s = j.at("sandbox");
        require_object(s, "forge.sandbox");
        require_known_keys(s, {"command", "program_name", "timeout_s", "memory_mb", "max_output_kb"}, "forge.sandbox");
        auto& d = c.sandbox;
        d.command = s.value("command", d.command);
        d.program_name = s.value("program_name", d.program_name);
        d.timeout_s = s.value("timeout_s", d.timeout_s);
        d.memory_mb = s.value("memory_mb", d.memory_mb);
        d.max_output_kb = s.value("max_output_kb", d.max_output_kb);
    }
}

void parse_funnel(const json& j, CliConfig& c, const fs::path& base) {
    require_object(j, "funnel");
    require_known_keys(j, {"enabled", "quotas", "consensus", "strict_tier2", "checklist", "analytical_models", "width"},
                       "funnel");
    auto& f = c.funnel;
    if (j.contains("enabled")) {
        const auto v = j.at("enabled").get<std::vector<bool>>();
        if (v.size() != funnel::kTierCount) throw Error(ErrorCode::Configuration, "funnel.enabled needs 6 flags");
        for (std::size_t t = 0; t < v.size(); ++t) f.enabled[t] = v[t];
    }
    if (j.contains("quotas")) {
        const auto& q = j.at("quotas");
        if (!q.is_array() || q.size() != funnel::kTierCount) {
            throw Error(ErrorCode::Configuration, "funnel.quotas needs 6 entries (null for none)");
        }
        for (std::size_t t = 0; t < q.size(); ++t) {
            f.quotas[t] = q[t].is_null() ? std::nullopt : std::optional<std::size_t>(q[t].get<std::size_t>());
        }
    }
    f.consensus = j.value("consensus", f.consensus);
    f.strict_tier2 = j.value("strict_tier2", f.strict_tier2);
    f.width = j.value("width", f.width);
    if (j.contains("checklist")) {
        f.checklist.clear();
        for (const auto& item : j.at("checklist")) {
            require_known_keys(item, {"id", "question"}, "funnel.checklist item");
            f.checklist.push_back({item.at("id").get<std::string>(), item.at("question").get<std::string>()});
        }
    }
    if (j.contains("analytical_models")) {
        const auto& m = j.at("analytical_models");
        require_object(m, "funnel.analytical_models");
        for (const auto& [domain, path] : m.items()) c.analytical_models[domain] = resolve(path, base);
    }
}

void require_exists(const std::optional<fs::path>& p, std::string_view what) {
    if (p && !fs::exists(*p)) {
        throw Error(ErrorCode::Configuration, std::string(what) + " not found: " + p->string());
    }
}

json opt_json(const std::optional<fs::path>& p) { return p ? json(p->string()) : json(nullptr); }

}  // namespace

modelforge::ProcessSandboxConfig SandboxSettings::to_process_config() const {
    modelforge::ProcessSandboxConfig c;
    c.command_template = command;
    c.program_name = program_name;
    c.limits.wall_clock = std::chrono::milliseconds(static_cast<std::int64_t>(timeout_s) * 1000);
    c.limits.memory_bytes = memory_mb << 20;
    c.limits.max_output_bytes = max_output_kb << 10;
    return c;
}

CliConfig config_from_json(const json& j, const fs::path& base_dir) {
    require_object(j, "configuration");
    require_known_keys(j, {"backend", "corpus", "out", "ideation", "panel", "forge", "funnel"}, "configuration");
    CliConfig c;
    try {
        if (j.contains("backend")) parse_backend(j.at("backend"), c, base_dir);
        c.corpus = opt_path(j, "corpus", base_dir);
        if (j.contains("out")) c.out = resolve(j.at("out"), base_dir);
        if (j.contains("ideation")) parse_ideation(j.at("ideation"), c, base_dir);
        if (j.contains("panel")) {
            const auto& p = j.at("panel");
            require_object(p, "panel");
            require_known_keys(p, {"personas"}, "panel");
            c.personas = opt_path(p, "personas", base_dir);
        }
        if (j.contains("forge")) parse_forge(j.at("forge"), c);
        if (j.contains("funnel")) parse_funnel(j.at("funnel"), c, base_dir);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Configuration, std::string("malformed configuration: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Configuration) throw;
        throw Error(ErrorCode::Configuration, e.detail());
    }
    return c;
}

CliConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Configuration, "cannot read configuration " + path.string());
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::Configuration, "configuration " + path.string() + " is not valid JSON");
    CliConfig c = config_from_json(j, path.parent_path());
    c.validate();
    return c;
}

void CliConfig::validate() const {
    try {
        backend.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Configuration, e.detail());
    }
    if (backend.kind == backend::BackendKind::Replay && !replay_transcript) {
        throw Error(ErrorCode::Configuration, "replay backend requires backend.replay_transcript");
    }
    require_exists(mock_script, "mock script");
    require_exists(replay_transcript, "replay transcript");
    require_exists(corpus, "corpus");
    require_exists(feedback_dir, "feedback directory");
    require_exists(personas, "persona library");
    for (const auto& [domain, path] : analytical_models) require_exists(path, "analytical model for " + domain);
    if (ideation.runs_per_paper == 0 || ideation.n_proposals == 0) {
        throw Error(ErrorCode::Configuration, "ideation runs_per_paper and n_proposals must be positive");
    }
    if (ideation.temp_lo > ideation.temp_hi) throw Error(ErrorCode::Configuration, "ideation temp_lo exceeds temp_hi");
    if (ideation.recursion_depth == 0) throw Error(ErrorCode::Configuration, "ideation recursion_depth must be >= 1");
    if (ideation.leakage.ngram < 2) throw Error(ErrorCode::Configuration, "ideation leakage_ngram must be >= 2");
    if (sandbox.timeout_s <= 0 || sandbox.memory_mb == 0 || sandbox.max_output_kb == 0) {
        throw Error(ErrorCode::Configuration, "forge sandbox limits must be positive");
    }
    if (sandbox.command.find("{program}") == std::string::npos) {
        throw Error(ErrorCode::Configuration, "forge sandbox command must contain {program}");
    }
    funnel.validate();
}

json CliConfig::snapshot() const {
    json models = json::object();
    for (const auto& [domain, path] : analytical_models) models[domain] = path.string();
    json quotas = json::array();
    for (const auto& q : funnel.quotas) quotas.push_back(q ? json(*q) : json(nullptr));
    json checklist = json::array();
    for (const auto& item : funnel.checklist) checklist.push_back(json{{"id", item.id}, {"question", item.question}});
    return json{
        {"backend",
         {{"kind", backend::to_string(backend.kind)},
          {"base_url", backend.base_url ? json(*backend.base_url) : json(nullptr)},
          {"model_id", backend.model_id},
          {"max_parallel", backend.max_parallel},
          {"retry_limit", backend.retry_limit},
          {"backoff_ms", backend.backoff_base.count()},
          {"timeout_s", backend.request_timeout.count()},
          {"seed", backend.seed ? json(*backend.seed) : json(nullptr)},
          {"mock_script", opt_json(mock_script)},
          {"replay_transcript", opt_json(replay_transcript)}}},
        {"corpus", opt_json(corpus)},
        {"out", out.string()},
        {"ideation",
         {{"runs_per_paper", ideation.runs_per_paper},
          {"n_proposals", ideation.n_proposals},
          {"temp_lo", ideation.temp_lo},
          {"temp_hi", ideation.temp_hi},
          {"generality_threshold", ideation.generality_threshold},
          {"leakage_ngram", ideation.leakage.ngram},
          {"leakage_judge", ideation.leakage.use_judge},
          {"expand", ideation.expand},
          {"recursion_depth", ideation.recursion_depth},
          {"domain_prompts", ideation.architect.domain_prompts},
          {"feedback_dir", opt_json(feedback_dir)},
          {"synthesis", ideation_synthesis}}},
        {"panel", {{"personas", opt_json(personas)}}},
        {"forge",
         {{"runs", forge.runs},
          {"concurrent_runs", forge.concurrent_runs},
          {"continue_unapproved", forge.continue_unapproved},
          {"sandbox",
           {{"command", sandbox.command},
            {"program_name", sandbox.program_name},
            {"timeout_s", sandbox.timeout_s},
            {"memory_mb", sandbox.memory_mb},
            {"max_output_kb", sandbox.max_output_kb}}}}},
        {"funnel",
         {{"enabled", funnel.enabled},
          {"quotas", std::move(quotas)},
          {"consensus", funnel.consensus},
          {"strict_tier2", funnel.strict_tier2},
          {"checklist", std::move(checklist)},
          {"analytical_models", std::move(models)},
          {"width", funnel.width}}},
    };
}

void apply_overrides(CliConfig& c, const Overrides& o) {
    if (o.backend) {
        c.backend.kind = backend::backend_kind_from(*o.backend);
        // A seed only means something to the mock backend.
        if (c.backend.kind != backend::BackendKind::Mock && !o.seed) c.backend.seed.reset();
        if (c.backend.kind != backend::BackendKind::Http) c.backend.base_url.reset();
    }
    if (o.seed) c.backend.seed = *o.seed;
    if (o.out) c.out = *o.out;
    if (o.corpus) c.corpus = *o.corpus;
    if (o.mock_script) c.mock_script = *o.mock_script;
    if (o.transcript) c.replay_transcript = *o.transcript;
    if (o.feedback) c.feedback_dir = *o.feedback;
}

}  // namespace gauntlet::cli
