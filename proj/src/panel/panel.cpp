#include "gauntlet/panel/panel.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/util/parallel.hpp"

#ifndef GAUNTLET_DATA_DIR
#define GAUNTLET_DATA_DIR "data"
#endif

namespace gauntlet::panel {

using backend::AgentRequest;
using backend::ask_structured;
using backend::ParseError;

std::string_view to_string(PersonaKind k) noexcept { return k == PersonaKind::Fixed ? "fixed" : "topical"; }

void Persona::validate() const {
    if (id.empty()) throw Error(ErrorCode::Configuration, "persona without id");
    if (charter.empty()) throw Error(ErrorCode::Configuration, "persona " + id + " has an empty charter");
    if (kind == PersonaKind::Fixed && !topic_tags.empty()) {
        throw Error(ErrorCode::Configuration, "fixed persona " + id + " must not carry topic tags");
    }
    if (kind == PersonaKind::Topical && topic_tags.empty()) {
        throw Error(ErrorCode::Configuration, "topical persona " + id + " has no topic tags");
    }
}

void PersonaLibrary::validate() const {
    std::set<std::string> ids;
    std::size_t topical = 0;
    for (const auto& p : personas) {
        p.validate();
        if (!ids.insert(p.id).second) throw Error(ErrorCode::Configuration, "duplicate persona id " + p.id);
        topical += p.kind == PersonaKind::Topical ? 1 : 0;
    }
    for (auto id : kFixedPersonaIds) {
        const auto* p = find(id);
        if (!p || p->kind != PersonaKind::Fixed) {
            throw Error(ErrorCode::Configuration, "persona library lacks fixed persona " + std::string(id));
        }
    }
    if (topical < 2) {
        throw Error(ErrorCode::Configuration,
                    "persona library needs at least 2 topical personas, has " + std::to_string(topical));
    }
}

const Persona* PersonaLibrary::find(std::string_view id) const {
    for (const auto& p : personas) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

std::vector<const Persona*> PersonaLibrary::fixed() const {
    std::vector<const Persona*> out;
    for (auto id : kFixedPersonaIds) {
        if (const auto* p = find(id)) out.push_back(p);
    }
    return out;
}

std::vector<std::string> PersonaLibrary::vocabulary() const {
    std::set<std::string> tags;
    for (const auto& p : personas) tags.insert(p.topic_tags.begin(), p.topic_tags.end());
    return {tags.begin(), tags.end()};
}

PersonaLibrary library_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::Configuration, "persona library must be a JSON array");
    PersonaLibrary lib;
    for (const auto& item : j) {
        require_known_keys(item, {"id", "display_name", "kind", "charter", "topic_tags"}, "persona");
        try {
            Persona p;
            p.id = item.at("id").get<std::string>();
            p.display_name = item.value("display_name", p.id);
            const auto kind = item.at("kind").get<std::string>();
            if (kind == "fixed") p.kind = PersonaKind::Fixed;
            else if (kind == "topical") p.kind = PersonaKind::Topical;
            else throw Error(ErrorCode::Configuration, "persona " + p.id + ": unknown kind '" + kind + "'");
            p.charter = item.at("charter").get<std::string>();
            for (const auto& t : item.value("topic_tags", std::vector<std::string>{})) {
                p.topic_tags.push_back(text::to_lower(text::trim(t)));
            }
            lib.personas.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Configuration, std::string("malformed persona entry: ") + e.what());
        }
    }
    lib.validate();
    return lib;
}

PersonaLibrary load_library(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Configuration, "cannot read persona library " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::Configuration, path.string() + " is not valid JSON");
    return library_from_json(j);
}

std::filesystem::path default_library_path() { return std::filesystem::path(GAUNTLET_DATA_DIR) / "personas.json"; }

namespace {

AgentRequest make(std::string role, std::string system, std::string user, std::string tag) {
    AgentRequest r;
    r.role_name = std::move(role);
    r.system_prompt = std::move(system);
    r.user_prompt = std::move(user);
    r.temperature = Temperature{0.3};
    r.request_tag = std::move(tag);
    return r;
}

std::string normalize_tag(std::string_view raw) {
    std::string t = text::to_lower(text::trim(raw));
    while (!t.empty() && (t.front() == '"' || t.front() == '\'' || t.front() == '`')) t.erase(t.begin());
    while (!t.empty() && (t.back() == '"' || t.back() == '\'' || t.back() == '`' || t.back() == '.' || t.back() == ',')) {
        t.pop_back();
    }
    return text::trim(t);
}

std::vector<std::string> parse_topics(std::string_view reply) {
    const auto v = text::parse_labeled(reply, {"TOPICS"});
    if (!v[0]) throw ParseError("missing TOPICS field");
    std::vector<std::string> raw = text::parse_bullets(*v[0]);
    if (raw.empty()) {
        // Accept a single comma-separated line as well.
        std::string line = text::trim(*v[0]);
        std::size_t start = 0;
        while (start <= line.size() && !line.empty()) {
            const auto comma = line.find(',', start);
            raw.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    std::vector<std::string> tags;
    for (const auto& r : raw) {
        auto t = normalize_tag(r);
        if (!t.empty() && std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(std::move(t));
    }
    if (tags.empty()) throw ParseError("TOPICS lists no tags");
    if (tags.size() > 5) tags.resize(5);
    return tags;
}

constexpr std::string_view kReviewFormat =
    "Structure the critique with these markdown headings, in order:\n"
    "## Mechanism\n## Methodology\n## Feasibility\n## Verdict\n"
    "End with one line:\nSTANCE: <one-sentence summary of your position>\n";

Critique parse_critique(std::string_view reply, std::string_view persona_id, std::string_view paper_id) {
    Critique c;
    c.persona_id = std::string(persona_id);
    c.paper_id = std::string(paper_id);
    const auto stance = text::parse_labeled(reply, {"STANCE"});
    c.stance_summary = stance[0].value_or("");
    for (auto& s : text::parse_sections(reply)) {
        // The stance line is reported separately, not as part of a section body.
        std::string body;
        for (const auto& line : text::split_lines(s.body)) {
            if (text::to_upper(text::trim(line)).rfind("STANCE:", 0) == 0) continue;
            if (!body.empty()) body += "\n";
            body += line;
        }
        s.body = text::trim(body);
        if (!s.body.empty()) c.sections.push_back(std::move(s));
    }
    if (c.sections.empty()) throw ParseError("critique has no non-empty '## ' section");
    return c;
}

std::vector<std::string> bullets_or_paragraph(const text::Section* s) {
    if (!s) return {};
    auto items = text::parse_bullets(s->body);
    if (items.empty() && !s->body.empty()) items.push_back(s->body);
    return items;
}

MasterClass parse_masterclass(std::string_view reply, std::string_view paper_id) {
    const auto sections = text::parse_sections(reply);
    MasterClass m;
    m.paper_id = std::string(paper_id);
    const auto* core = text::find_section(sections, "Core Insight");
    if (!core || core->body.empty()) throw ParseError("missing or empty '## Core Insight' section");
    m.core_insight = core->body;
    m.agreements = bullets_or_paragraph(text::find_section(sections, "Agreements"));
    m.tensions = bullets_or_paragraph(text::find_section(sections, "Tensions"));
    if (const auto* lim = text::find_section(sections, "Frank Limitations")) m.frank_limitations = lim->body;
    if (m.frank_limitations.empty()) throw ParseError("missing or empty '## Frank Limitations' section");
    m.full_text = text::trim(reply);
    return m;
}

}  // namespace

std::vector<std::string> detect_topics(std::string_view paper_id, std::string_view paper_text,
                                       const PersonaLibrary& library, AgentClient& client) {
    if (text::trim(paper_text).empty()) throw Error(ErrorCode::InvalidArgument, "paper text is empty");
    std::string user = "[KNOWN TOPICS]\n";
    for (const auto& t : library.vocabulary()) user += "- " + t + "\n";
    user += "\n[PAPER]\n" + std::string(paper_text) +
            "\n[END PAPER]\n\nList one to five sub-topics of this paper, most central first. Prefer the known "
            "topics when one fits.\nReply with:\nTOPICS:\n- <topic>\n";
    auto req = make("topic-detector",
                    "You classify computer architecture papers by sub-topic so that matching expert reviewers can "
                    "be assigned.",
                    std::move(user), "panel/" + std::string(paper_id) + "/topics");
    return ask_structured(client, req, parse_topics, ErrorCode::TopicDetectionFailed);
}

Selection select_personas(const std::vector<std::string>& tags, const PersonaLibrary& library) {
    std::vector<std::pair<std::size_t, const Persona*>> scored;
    std::set<std::string> wanted;
    for (const auto& t : tags) wanted.insert(normalize_tag(t));
    for (const auto& p : library.personas) {
        if (p.kind != PersonaKind::Topical) continue;
        std::set<std::string> own(p.topic_tags.begin(), p.topic_tags.end());
        std::size_t n = 0;
        for (const auto& t : own) n += wanted.count(t);
        scored.emplace_back(n, &p);
    }
    if (scored.size() < 2) {
        throw Error(ErrorCode::Configuration,
                    "persona library needs at least 2 topical personas, has " + std::to_string(scored.size()));
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second->id < b.second->id;
    });
    Selection s;
    for (std::size_t i = 0; i < 2; ++i) {
        s.personas.push_back(*scored[i].second);
        s.overlap.push_back(scored[i].first);
    }
    s.fallback = scored[0].first == 0;
    return s;
}

Critique review(std::string_view paper_id, std::string_view paper_text, const Persona& persona, AgentClient& client) {
    persona.validate();
    std::string system = "You are " + persona.display_name +
                         ", reviewing a computer architecture paper on an adversarial panel.\n[CHARTER]\n" +
                         persona.charter + "\n";
    std::string user = "[PAPER]\n" + std::string(paper_text) +
                       "\n[END PAPER]\n\nWrite your independent critique, driven by your charter.\n";
    user += kReviewFormat;
    auto req = make("reviewer", std::move(system), std::move(user),
                    "panel/" + std::string(paper_id) + "/review/" + persona.id);
    return ask_structured(
        client, req, [&](std::string_view r) { return parse_critique(r, persona.id, paper_id); },
        ErrorCode::ReviewFailed);
}

MasterClass synthesize(const std::vector<Critique>& critiques, std::string_view paper_text, AgentClient& client) {
    if (critiques.size() != 6) {
        throw Error(ErrorCode::Precondition,
                    "synthesis needs exactly 6 critiques, got " + std::to_string(critiques.size()));
    }
    const std::string paper_id = critiques.front().paper_id;
    for (const auto& c : critiques) {
        if (c.paper_id != paper_id) throw Error(ErrorCode::Precondition, "critiques cover different papers");
    }
    std::string user = "[PAPER]\n" + std::string(paper_text) + "\n[END PAPER]\n\n";
    for (const auto& c : critiques) {
        user += "[CRITIQUE: " + c.persona_id + "]\n";
        for (const auto& s : c.sections) user += "## " + s.heading + "\n" + s.body + "\n";
        if (!c.stance_summary.empty()) user += "STANCE: " + c.stance_summary + "\n";
        user += "[END CRITIQUE]\n\n";
    }
    user += "Combine the six critiques into one reading guide. Use these headings:\n"
            "## Agreements\n(bullets: points the reviewers share)\n"
            "## Tensions\n(bullets: points where reviewers contradict each other)\n"
            "## Core Insight\n## Frank Limitations\n";
    auto req = make("synthesizer",
                    "You write a Master Class reading guide for a paper from the critiques of six expert reviewers.",
                    std::move(user), "panel/" + paper_id + "/synthesis");
    return ask_structured(
        client, req, [&](std::string_view r) { return parse_masterclass(r, paper_id); }, ErrorCode::SynthesisFailed);
}

PanelResult run_panel(std::string_view paper_id, std::string_view paper_text, const PersonaLibrary& library,
                      AgentClient& client) {
    library.validate();
    PanelResult out;
    out.paper_id = std::string(paper_id);
    out.topics = detect_topics(paper_id, paper_text, library, client);
    out.selection = select_personas(out.topics, library);

    std::vector<const Persona*> members = library.fixed();
    for (const auto& p : out.selection.personas) members.push_back(&p);
    for (const auto* p : members) out.panel.push_back(p->id);

    struct Outcome {
        std::optional<Critique> critique;
        std::string error;
    };
    auto outcomes = parallel_map(members.size(), members.size(), [&](std::size_t i) {
        Outcome o;
        try {
            o.critique = review(paper_id, paper_text, *members[i], client);
        } catch (const Error& e) {
            o.error = e.what();
        }
        return o;
    });
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].critique) out.critiques.push_back(std::move(*outcomes[i].critique));
        else out.failures.push_back({members[i]->id, outcomes[i].error});
    }
    if (!out.failures.empty()) return out;
    try {
        out.masterclass = synthesize(out.critiques, paper_text, client);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SynthesisFailed) throw;
        out.synthesis_error = e.what();
    }
    return out;
}

json to_json(const Persona& p) {
    return json{{"id", p.id},
                {"display_name", p.display_name},
                {"kind", to_string(p.kind)},
                {"charter", p.charter},
                {"topic_tags", p.topic_tags}};
}

json to_json(const Critique& c) {
    json sections = json::array();
    for (const auto& s : c.sections) sections.push_back(json{{"heading", s.heading}, {"body", s.body}});
    return json{{"persona_id", c.persona_id},
                {"paper_id", c.paper_id},
                {"sections", std::move(sections)},
                {"stance_summary", c.stance_summary}};
}

json to_json(const MasterClass& m) {
    return json{{"paper_id", m.paper_id},
                {"agreements", m.agreements},
                {"tensions", m.tensions},
                {"core_insight", m.core_insight},
                {"frank_limitations", m.frank_limitations},
                {"full_text", m.full_text}};
}

json to_json(const PanelResult& r) {
    json critiques = json::array();
    for (const auto& c : r.critiques) critiques.push_back(to_json(c));
    json failures = json::array();
    for (const auto& f : r.failures) failures.push_back(json{{"persona_id", f.persona_id}, {"error", f.error}});
    json selected = json::array();
    for (std::size_t i = 0; i < r.selection.personas.size(); ++i) {
        selected.push_back(json{{"id", r.selection.personas[i].id}, {"overlap", r.selection.overlap[i]}});
    }
    json j{{"paper_id", r.paper_id},
           {"topics", r.topics},
           {"selection", json{{"personas", std::move(selected)}, {"fallback", r.selection.fallback}}},
           {"panel", r.panel},
           {"complete", r.complete()},
           {"critiques", std::move(critiques)},
           {"failures", std::move(failures)}};
    j["masterclass"] = r.masterclass ? to_json(*r.masterclass) : json(nullptr);
    if (!r.synthesis_error.empty()) j["synthesis_error"] = r.synthesis_error;
    return j;
}

std::string masterclass_markdown(const MasterClass& m) {
    return "# Master Class: " + m.paper_id + "\n\n" + m.full_text + "\n";
}

}  // namespace gauntlet::panel
