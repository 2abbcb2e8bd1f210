#include "gauntlet/store/report.hpp"

#include <set>
#include <vector>

#include "gauntlet/util/error.hpp"

namespace gauntlet::store {

ReportFormat report_format_from(std::string_view s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "markdown" || s == "md") return ReportFormat::Markdown;
    throw Error(ErrorCode::InvalidArgument, "unknown report format '" + std::string(s) + "'");
}

namespace {

std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string cell(const json& v) {
    std::string s = v.is_primitive() ? scalar(v) : v.dump();
    std::string out;
    for (char c : s) {
        if (c == '|') out += "\\|";
        else if (c == '\n') out += ' ';
        else out += c;
    }
    return out;
}

bool is_table(const json& v) {
    if (!v.is_array() || v.empty()) return false;
    for (const auto& e : v) {
        if (!e.is_object()) return false;
    }
    return true;
}

void render(std::string& out, const json& v, int depth);

void render_table(std::string& out, const json& rows) {
    std::vector<std::string> cols;
    std::set<std::string> seen;
    for (const auto& row : rows) {
        for (const auto& [k, _] : row.items()) {
            if (seen.insert(k).second) cols.push_back(k);
        }
    }
    out += "|";
    for (const auto& c : cols) out += " " + c + " |";
    out += "\n|";
    for (std::size_t i = 0; i < cols.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& row : rows) {
        out += "|";
        for (const auto& c : cols) out += " " + (row.contains(c) ? cell(row[c]) : std::string{}) + " |";
        out += "\n";
    }
    out += "\n";
}

void render_object(std::string& out, const json& obj, int depth) {
    bool listed = false;
    for (const auto& [k, v] : obj.items()) {
        if (v.is_primitive()) {
            out += "- **" + k + "**: " + scalar(v) + "\n";
            listed = true;
        }
    }
    if (listed) out += "\n";
    for (const auto& [k, v] : obj.items()) {
        if (v.is_primitive()) continue;
        out += std::string(static_cast<std::size_t>(std::min(depth, 6)), '#') + " " + k + "\n\n";
        render(out, v, depth + 1);
    }
}

void render(std::string& out, const json& v, int depth) {
    if (v.is_object()) {
        render_object(out, v, depth);
    } else if (is_table(v)) {
        render_table(out, v);
    } else if (v.is_array()) {
        if (v.empty()) {
            out += "(none)\n\n";
            return;
        }
        for (const auto& e : v) out += "- " + cell(e) + "\n";
        out += "\n";
    } else {
        out += scalar(v) + "\n\n";
    }
}

}  // namespace

std::string emit_report(const RunRecord& record, const json& body, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json doc{{"pipeline", to_string(record.pipeline)}, {"status", to_string(record.status)}, {"report", body}};
        return doc.dump(2) + "\n";
    }
    std::string out = "# " + std::string(to_string(record.pipeline)) + " report\n\n";
    if (record.status != RunStatus::Complete) {
        out += "> **PARTIAL**: this run finished with status `" + std::string(to_string(record.status)) +
               "`; figures below cover only the work that completed.\n\n";
    }
    out += "- **status**: " + std::string(to_string(record.status)) + "\n\n";
    render(out, body, 2);
    return out;
}

}  // namespace gauntlet::store
