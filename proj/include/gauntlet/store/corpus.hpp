#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace gauntlet::store {

/// Characters of paper text treated as the problem-setup portion when a
/// paper's meta.json does not say otherwise (roughly three typeset pages).
inline constexpr std::size_t kDefaultProblemWindow = 12000;

struct CorpusMeta {
    std::size_t problem_window = kDefaultProblemWindow;
    bool ground_truth_available = true;
    std::vector<std::string> tags;
};

struct CorpusEntry {
    std::string paper_id;
    std::filesystem::path directory;
    std::filesystem::path text_path;
    CorpusMeta meta;
};

struct CorpusScan {
    std::vector<CorpusEntry> entries;      // sorted by paper_id
    std::vector<std::string> diagnostics;  // malformed entries, skipped
    std::vector<std::string> warnings;
};

/// Reads corpus/{paper}/{paper.txt, meta.json}. Malformed entries are
/// reported in diagnostics; a paper_id claimed by two directories is a hard
/// error naming both.
CorpusScan ingest_corpus(const std::filesystem::path& directory);

std::string read_paper_text(const CorpusEntry& entry);

}  // namespace gauntlet::store
