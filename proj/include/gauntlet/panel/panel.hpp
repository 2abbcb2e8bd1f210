#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gauntlet/backend/client.hpp"
#include "gauntlet/util/text.hpp"

namespace gauntlet::panel {

using json = nlohmann::json;
using backend::AgentClient;

enum class PersonaKind { Fixed, Topical };

std::string_view to_string(PersonaKind k) noexcept;

struct Persona {
    std::string id;
    std::string display_name;
    PersonaKind kind = PersonaKind::Topical;
    /// The question that drives this reviewer.
    std::string charter;
    std::vector<std::string> topic_tags;  // topical only, lowercase

    void validate() const;
};

/// The four domain-general reviewers, in panel order.
inline constexpr std::string_view kFixedPersonaIds[] = {"micro-architect", "workload-analyst", "simulation-expert",
                                                        "chief-architect"};

struct PersonaLibrary {
    std::vector<Persona> personas;

    /// Requires unique ids, all four fixed personas and at least two topical ones.
    void validate() const;
    const Persona* find(std::string_view id) const;
    std::vector<const Persona*> fixed() const;  // kFixedPersonaIds order
    /// Every topical tag, sorted and deduplicated.
    std::vector<std::string> vocabulary() const;
};

/// JSON array of {id, display_name, kind, charter, topic_tags}.
PersonaLibrary library_from_json(const json& j);
PersonaLibrary load_library(const std::filesystem::path& path);
/// The library shipped in data/personas.json.
std::filesystem::path default_library_path();

/// 1 to 5 lowercase tags, in the model's ranking order.
std::vector<std::string> detect_topics(std::string_view paper_id, std::string_view paper_text,
                                       const PersonaLibrary& library, AgentClient& client);

struct Selection {
    std::vector<Persona> personas;     // exactly two topical personas
    std::vector<std::size_t> overlap;  // matching tags per chosen persona
    /// True when no topical persona shares a tag with the paper.
    bool fallback = false;
};

/// Pure. Maximises exact tag overlap; ties go to the smaller id.
Selection select_personas(const std::vector<std::string>& tags, const PersonaLibrary& library);

struct Critique {
    std::string persona_id;
    std::string paper_id;
    std::vector<text::Section> sections;
    std::string stance_summary;
};

/// The review prompt carries the paper and the persona charter only.
Critique review(std::string_view paper_id, std::string_view paper_text, const Persona& persona, AgentClient& client);

struct MasterClass {
    std::string paper_id;
    std::vector<std::string> agreements;
    std::vector<std::string> tensions;
    std::string core_insight;
    std::string frank_limitations;
    std::string full_text;
};

/// Requires exactly six critiques of one paper; checked before any call.
MasterClass synthesize(const std::vector<Critique>& critiques, std::string_view paper_text, AgentClient& client);

struct ReviewFailure {
    std::string persona_id;
    std::string error;
};

struct PanelResult {
    std::string paper_id;
    std::vector<std::string> topics;
    Selection selection;
    std::vector<std::string> panel;  // persona ids, fixed first
    std::vector<Critique> critiques;  // panel order, successful reviews only
    std::vector<ReviewFailure> failures;
    std::optional<MasterClass> masterclass;
    std::string synthesis_error;

    bool complete() const noexcept { return masterclass.has_value(); }
};

/// Topic detection, selection, six concurrent reviews, then synthesis. A
/// failed review leaves a partial result without a master class.
PanelResult run_panel(std::string_view paper_id, std::string_view paper_text, const PersonaLibrary& library,
                      AgentClient& client);

json to_json(const Persona& p);
json to_json(const Critique& c);
json to_json(const MasterClass& m);
json to_json(const PanelResult& r);
std::string masterclass_markdown(const MasterClass& m);

}  // namespace gauntlet::panel
