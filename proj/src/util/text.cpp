#include "gauntlet/util/text.hpp"

#include <algorithm>
#include <cctype>

namespace gauntlet::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Strips markdown decoration from the front of a line: list markers, heading
// hashes, emphasis stars and an opening bracket are all ignored when looking
// for a label.
std::string_view strip_decoration(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (is_space(line[i]) || line[i] == '#' || line[i] == '*' || line[i] == '-' ||
                               line[i] == '>' || line[i] == '_')) {
        ++i;
    }
    return line.substr(i);
}

// If `line` starts with `label`, returns the remainder after the label and any
// closing decoration and colon. Requires a word boundary after the label.
std::optional<std::string> match_label(std::string_view line, std::string_view label) {
    std::string_view rest = strip_decoration(line);
    bool bracketed = false;
    if (!rest.empty() && rest.front() == '[') {
        bracketed = true;
        rest.remove_prefix(1);
    }
    if (rest.size() < label.size()) return std::nullopt;
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(rest[i])) != std::tolower(static_cast<unsigned char>(label[i]))) {
            return std::nullopt;
        }
    }
    rest.remove_prefix(label.size());
    if (bracketed) {
        if (rest.empty() || rest.front() != ']') return std::nullopt;
        rest.remove_prefix(1);
    }
    if (!rest.empty() && (std::isalnum(static_cast<unsigned char>(rest.front())) || rest.front() == '_')) {
        return std::nullopt;
    }
    std::size_t i = 0;
    bool colon = false;
    while (i < rest.size() && (rest[i] == '*' || rest[i] == ':' || rest[i] == ']' || is_space(rest[i]) ||
                               rest[i] == '_')) {
        if (rest[i] == ':') colon = true;
        ++i;
    }
    // A bare word at the start of a sentence is not a label; demand a colon
    // unless the label was bracketed or written as a heading.
    std::size_t lead = 0;
    while (lead < line.size() && is_space(line[lead])) ++lead;
    const bool heading = lead < line.size() && line[lead] == '#';
    if (!colon && !bracketed && !heading) return std::nullopt;
    return trim(rest.substr(i));
}

}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find('\n', start);
        if (end == std::string_view::npos) {
            lines.emplace_back(s.substr(start));
            break;
        }
        std::string_view line = s.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        start = end + 1;
    }
    return lines;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
    });
    return it != haystack.end();
}

bool contains_digit(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    if (from.empty()) return s;
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::string_view utf8_prefix(std::string_view s, std::size_t max_bytes) {
    if (max_bytes >= s.size()) return s;
    std::size_t n = max_bytes;
    // Back off over continuation bytes so the cut lands on a code point start.
    while (n > 0 && (static_cast<unsigned char>(s[n]) & 0xC0) == 0x80) --n;
    return s.substr(0, n);
}

std::vector<std::string> word_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c >= 0x80) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::vector<std::optional<std::string>> parse_labeled(std::string_view body, const std::vector<std::string>& labels) {
    std::vector<std::optional<std::string>> values(labels.size());
    std::optional<std::size_t> current;
    std::string buffer;
    auto flush = [&] {
        if (current && !values[*current]) values[*current] = trim(buffer);
        buffer.clear();
    };
    for (const auto& line : split_lines(body)) {
        std::optional<std::size_t> hit;
        std::string rest;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (auto r = match_label(line, labels[i])) {
                // Prefer the longest label when several share a prefix.
                if (!hit || labels[i].size() > labels[*hit].size()) {
                    hit = i;
                    rest = *r;
                }
            }
        }
        if (hit) {
            flush();
            current = hit;
            buffer = rest;
        } else if (current) {
            if (!buffer.empty()) buffer.push_back('\n');
            buffer += line;
        }
    }
    flush();
    return values;
}

std::vector<Section> parse_sections(std::string_view body) {
    std::vector<Section> sections;
    for (const auto& line : split_lines(body)) {
        std::string_view v = line;
        std::size_t hashes = 0;
        while (hashes < v.size() && v[hashes] == '#') ++hashes;
        if (hashes >= 1 && hashes <= 3 && hashes < v.size() && v[hashes] == ' ') {
            std::string heading = trim(v.substr(hashes));
            while (!heading.empty() && (heading.back() == ':' || heading.back() == '*')) heading.pop_back();
            while (!heading.empty() && heading.front() == '*') heading.erase(heading.begin());
            sections.push_back({trim(heading), {}});
            continue;
        }
        if (sections.empty()) continue;
        auto& b = sections.back().body;
        if (!b.empty()) b.push_back('\n');
        b += line;
    }
    for (auto& s : sections) s.body = trim(s.body);
    return sections;
}

const Section* find_section(const std::vector<Section>& sections, std::string_view heading) {
    for (const auto& s : sections) {
        if (to_lower(s.heading) == to_lower(heading)) return &s;
    }
    return nullptr;
}

std::vector<std::string> parse_bullets(std::string_view body) {
    std::vector<std::string> items;
    for (const auto& raw : split_lines(body)) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        std::size_t skip = 0;
        if (line[0] == '-' || line[0] == '*' || line[0] == '+') {
            skip = 1;
        } else {
            std::size_t d = 0;
            while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
            if (d > 0 && d < line.size() && (line[d] == '.' || line[d] == ')')) skip = d + 1;
        }
        if (skip > 0) {
            items.push_back(trim(std::string_view(line).substr(skip)));
        } else if (!items.empty()) {
            items.back() += " " + line;
        }
    }
    items.erase(std::remove_if(items.begin(), items.end(), [](const std::string& s) { return s.empty(); }),
                items.end());
    return items;
}

std::optional<std::string> fenced_block(std::string_view body) {
    auto open = body.find("```");
    if (open == std::string_view::npos) return std::nullopt;
    auto line_end = body.find('\n', open);
    if (line_end == std::string_view::npos) return std::nullopt;
    auto close = body.find("```", line_end + 1);
    if (close == std::string_view::npos) return std::nullopt;
    return std::string(body.substr(line_end + 1, close - line_end - 1));
}

std::optional<std::size_t> first_keyword(std::string_view s, const std::vector<std::string>& keywords) {
    auto fold = [](std::string_view v) {
        std::string out = to_upper(v);
        for (auto& c : out) {
            if (c == ' ' || c == '-') c = '_';
        }
        return out;
    };
    const std::string hay = fold(s);
    std::optional<std::size_t> best;
    std::size_t best_pos = std::string::npos;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        auto pos = hay.find(fold(keywords[i]));
        if (pos != std::string::npos && (pos < best_pos || (pos == best_pos && keywords[i].size() > keywords[*best].size()))) {
            best = i;
            best_pos = pos;
        }
    }
    return best;
}

std::string safe_component(std::string_view id) {
    std::string out;
    for (char c : id) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    if (out.empty() || out == "." || out == "..") out = "_" + out;
    return out;
}

}  // namespace gauntlet::text
