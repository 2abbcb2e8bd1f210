#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Helpers for reading the loosely structured text that model agents reply with.
namespace gauntlet::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
bool contains_ci(std::string_view haystack, std::string_view needle);
bool contains_digit(std::string_view s);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

/// Longest prefix of `s` that is at most `max_bytes` long and does not end
/// inside a UTF-8 multi-byte sequence.
std::string_view utf8_prefix(std::string_view s, std::size_t max_bytes);

/// Lowercased alphanumeric word tokens.
std::vector<std::string> word_tokens(std::string_view s);

/// Parses "LABEL: value" blocks. A label line may be decorated as `[LABEL]:`,
/// `**LABEL:**`, `- LABEL:` or `### LABEL`; matching is case-insensitive. A
/// value runs until the next recognised label. Returns one entry per label in
/// the order given; labels that never appear map to std::nullopt.
std::vector<std::optional<std::string>> parse_labeled(std::string_view body,
                                                     const std::vector<std::string>& labels);

struct Section {
    std::string heading;
    std::string body;
};

/// Splits on markdown headings of level 1-3 (`#`, `##`, `###`). Text before
/// the first heading is dropped.
std::vector<Section> parse_sections(std::string_view body);

/// Finds a section by case-insensitive heading.
const Section* find_section(const std::vector<Section>& sections, std::string_view heading);

/// Bullet items (`-`, `*`, `+`, `1.`) of a block; continuation lines are joined.
std::vector<std::string> parse_bullets(std::string_view body);

/// Body of the first fenced code block (```lang ... ```), if any.
std::optional<std::string> fenced_block(std::string_view body);

/// First occurrence (by position) of any of `keywords` in `s`, compared
/// case-insensitively. Returns the index into `keywords`.
std::optional<std::size_t> first_keyword(std::string_view s, const std::vector<std::string>& keywords);

/// Filesystem-safe rendering of an identifier.
std::string safe_component(std::string_view id);

}  // namespace gauntlet::text
