#include "gauntlet/backend/mock.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/util/hash.hpp"
#include "gauntlet/util/text.hpp"

namespace gauntlet::backend {

namespace {

std::uint64_t choice_seed(std::uint64_t seed, std::string_view digest, std::string_view tag, std::uint64_t salt) {
    std::uint64_t h = hash::fnv1a64(digest);
    h = hash::fnv1a64(tag, h);
    return hash::splitmix64(seed ^ hash::splitmix64(h ^ hash::splitmix64(salt)));
}

std::int64_t word_count(std::string_view s) {
    std::int64_t n = 0;
    bool in_word = false;
    for (char c : s) {
        const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view value) noexcept {
    std::size_t p = 0, v = 0, star = std::string_view::npos, mark = 0;
    while (v < value.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == value[v])) {
            ++p;
            ++v;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = v;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            v = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

MockScript MockScript::from_json(const json& j) {
    require_known_keys(j, {"rules"}, "mock script");
    MockScript script;
    for (const auto& r : j.value("rules", json::array())) {
        require_known_keys(r, {"role", "contains", "tag", "response", "responses"}, "mock rule");
        MockRule rule;
        rule.role_pattern = r.value("role", std::string("*"));
        rule.prompt_contains = r.value("contains", std::string());
        rule.tag_contains = r.value("tag", std::string());
        if (r.contains("response")) rule.responses.push_back(r["response"].get<std::string>());
        if (r.contains("responses")) {
            for (const auto& s : r["responses"]) rule.responses.push_back(s.get<std::string>());
        }
        if (rule.responses.empty()) throw Error(ErrorCode::Configuration, "mock rule for '" + rule.role_pattern + "' has no response");
        script.rules.push_back(std::move(rule));
    }
    return script;
}

MockScript MockScript::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Configuration, "cannot read mock script " + path.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Configuration, "mock script " + path.string() + ": " + e.what());
    }
}

json MockScript::to_json() const {
    json rules = json::array();
    for (const auto& r : this->rules) {
        json jr{{"role", r.role_pattern}, {"responses", r.responses}};
        if (!r.prompt_contains.empty()) jr["contains"] = r.prompt_contains;
        if (!r.tag_contains.empty()) jr["tag"] = r.tag_contains;
        rules.push_back(std::move(jr));
    }
    return json{{"rules", rules}};
}

MockScript MockScript::overlaid_by(const MockScript& other) const {
    MockScript out = other;
    out.rules.insert(out.rules.end(), rules.begin(), rules.end());
    return out;
}

std::string render_mock_template(std::string_view tmpl, const AgentRequest& request, std::uint64_t seed,
                                 std::string_view digest) {
    std::string out;
    std::size_t pos = 0;
    std::uint64_t salt = 0;
    while (pos < tmpl.size()) {
        const auto open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        const auto close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        const std::string_view token = tmpl.substr(open + 2, close - open - 2);
        ++salt;
        if (token == "digest") {
            out.append(digest.substr(0, 12));
        } else if (token == "role") {
            out.append(request.role_name);
        } else if (token == "tag") {
            out.append(request.request_tag);
        } else if (token == "temperature") {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", request.temperature.value());
            out.append(buf);
        } else if (token.starts_with("pick:")) {
            std::vector<std::string_view> options;
            std::string_view rest = token.substr(5);
            for (std::size_t bar; (bar = rest.find('|')) != std::string_view::npos; rest.remove_prefix(bar + 1)) {
                options.push_back(rest.substr(0, bar));
            }
            options.push_back(rest);
            out.append(options[choice_seed(seed, digest, request.request_tag, salt) % options.size()]);
        } else if (token.starts_with("int:")) {
            long lo = 0, hi = 0;
            if (std::sscanf(std::string(token.substr(4)).c_str(), "%ld:%ld", &lo, &hi) == 2 && hi >= lo) {
                const auto span = static_cast<std::uint64_t>(hi - lo + 1);
                out.append(std::to_string(lo + static_cast<long>(choice_seed(seed, digest, request.request_tag, salt) % span)));
            }
        } else {
            out.append(tmpl.substr(open, close + 2 - open));
        }
        pos = close + 2;
    }
    return out;
}

MockBackend::MockBackend(MockScript script, std::uint64_t seed, std::string model_id)
    : script_(std::move(script)), seed_(seed), model_id_(std::move(model_id)) {}

void MockBackend::install(MockScript script) {
    std::lock_guard lock(mu_);
    script_ = std::move(script);
}

AgentResponse MockBackend::complete(const AgentRequest& request) {
    const std::string digest = request_digest(request);
    AgentResponse response;
    response.model_id = model_id_;
    response.provenance = Provenance::Mock;
    response.text = std::string(kMockSentinel);
    {
        std::lock_guard lock(mu_);
        for (const auto& rule : script_.rules) {
            if (!glob_match(rule.role_pattern, request.role_name)) continue;
            if (!rule.prompt_contains.empty() && request.system_prompt.find(rule.prompt_contains) == std::string::npos &&
                request.user_prompt.find(rule.prompt_contains) == std::string::npos) {
                continue;
            }
            if (!rule.tag_contains.empty() && request.request_tag.find(rule.tag_contains) == std::string::npos) continue;
            const std::string& tmpl =
                rule.responses.size() == 1
                    ? rule.responses.front()
                    : rule.responses[choice_seed(seed_, digest, request.request_tag, 0) % rule.responses.size()];
            response.text = render_mock_template(tmpl, request, seed_, digest);
            break;
        }
    }
    response.token_usage.input = word_count(request.system_prompt) + word_count(request.user_prompt);
    response.token_usage.output = word_count(response.text);
    return response;
}

std::shared_ptr<MockBackend> mock_script(std::vector<MockRule> rules, std::uint64_t seed) {
    return std::make_shared<MockBackend>(MockScript{std::move(rules)}, seed);
}

}  // namespace gauntlet::backend
