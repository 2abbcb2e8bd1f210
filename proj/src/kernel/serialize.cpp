#include "gauntlet/kernel/serialize.hpp"

#include <algorithm>

#include "gauntlet/util/error.hpp"

namespace gauntlet {

void require_known_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, std::string(where) + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorCode::InvalidArgument, std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

void to_json(json& j, const Lineage& v) {
    j = json{{"parent_id", v.parent_id}, {"mode", std::string(to_string(v.mode))}};
}

void from_json(const json& j, Lineage& v) {
    v.parent_id = j.at("parent_id").get<std::string>();
    v.mode = expansion_mode_from(j.at("mode").get<std::string>());
}

void to_json(json& j, const ProblemStatement& v) {
    j = json{{"id", v.id},
             {"source", std::string(to_string(v.source))},
             {"context", v.context},
             {"symptom", v.symptom},
             {"constraint", v.constraint},
             {"generality_score", v.generality_score ? json(*v.generality_score) : json(nullptr)},
             {"lineage", v.lineage ? json(*v.lineage) : json(nullptr)}};
}

void from_json(const json& j, ProblemStatement& v) {
    v.id = j.at("id").get<std::string>();
    v.source = problem_source_from(j.value("source", std::string("manual")));
    v.context = j.at("context").get<std::string>();
    v.symptom = j.at("symptom").get<std::string>();
    v.constraint = j.at("constraint").get<std::string>();
    v.generality_score.reset();
    if (j.contains("generality_score") && !j["generality_score"].is_null()) {
        v.generality_score = j["generality_score"].get<int>();
    }
    v.lineage.reset();
    if (j.contains("lineage") && !j["lineage"].is_null()) v.lineage = j["lineage"].get<Lineage>();
}

void to_json(json& j, const MechanismProposal& v) {
    j = json{{"id", v.id},
             {"problem_id", v.problem_id},
             {"title", v.title},
             {"mechanism", v.mechanism},
             {"rationale", v.rationale},
             {"evaluation_plan", v.evaluation_plan},
             {"temperature", v.temperature.value()}};
}

void from_json(const json& j, MechanismProposal& v) {
    v.id = j.at("id").get<std::string>();
    v.problem_id = j.at("problem_id").get<std::string>();
    v.title = j.at("title").get<std::string>();
    v.mechanism = j.at("mechanism").get<std::string>();
    v.rationale = j.at("rationale").get<std::string>();
    v.evaluation_plan = j.at("evaluation_plan").get<std::string>();
    v.temperature = Temperature(j.value("temperature", 0.7));
}

void to_json(json& j, const RunStats& v) {
    j = json{{"n_total", v.n_total()},
             {"n_viable", v.n_viable()},
             {"n_rediscovery", v.n_rediscovery},
             {"n_alternative", v.n_alternative},
             {"n_fail", v.n_fail},
             {"viable_rate", v.viable_rate()},
             {"rediscovery_rate", v.rediscovery_rate()},
             {"alternative_rate", v.alternative_rate()},
             {"fail_rate", v.fail_rate()}};
}

void from_json(const json& j, RunStats& v) {
    v.n_rediscovery = j.at("n_rediscovery").get<std::size_t>();
    v.n_alternative = j.at("n_alternative").get<std::size_t>();
    v.n_fail = j.at("n_fail").get<std::size_t>();
}

}  // namespace gauntlet
