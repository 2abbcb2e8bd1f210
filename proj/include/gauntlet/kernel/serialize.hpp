#pragma once

#include <json.hpp>

#include "gauntlet/kernel/types.hpp"

// JSON forms of the kernel types. Enumerations serialise as their canonical
// spelling; RunStats carries counts and the rates derived from them.
namespace gauntlet {

using json = nlohmann::json;

void to_json(json& j, const Lineage& v);
void from_json(const json& j, Lineage& v);
void to_json(json& j, const ProblemStatement& v);
void from_json(const json& j, ProblemStatement& v);
void to_json(json& j, const MechanismProposal& v);
void from_json(const json& j, MechanismProposal& v);
void to_json(json& j, const RunStats& v);
void from_json(const json& j, RunStats& v);

/// Rejects keys outside `allowed`; used by every strict loader.
void require_known_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where);

}  // namespace gauntlet
