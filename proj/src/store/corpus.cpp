#include "gauntlet/store/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gauntlet/util/error.hpp"

namespace gauntlet::store {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

CorpusScan ingest_corpus(const fs::path& directory) {
    if (!fs::is_directory(directory)) {
        throw Error(ErrorCode::CorpusError, "corpus directory not found: " + directory.string());
    }
    CorpusScan scan;
    std::vector<fs::path> dirs;
    for (const auto& de : fs::directory_iterator(directory)) {
        if (de.is_directory()) dirs.push_back(de.path());
    }
    std::sort(dirs.begin(), dirs.end());

    std::map<std::string, fs::path> claimed;
    for (const auto& dir : dirs) {
        const auto text_path = dir / "paper.txt";
        const auto meta_path = dir / "meta.json";
        if (!fs::is_regular_file(text_path)) {
            scan.diagnostics.push_back(dir.string() + ": missing paper.txt");
            continue;
        }
        const auto size = fs::file_size(text_path);
        if (size == 0) {
            scan.diagnostics.push_back(dir.string() + ": paper.txt is empty");
            continue;
        }
        CorpusEntry entry;
        entry.paper_id = dir.filename().string();
        entry.directory = dir;
        entry.text_path = text_path;
        entry.meta.problem_window = std::min<std::size_t>(kDefaultProblemWindow, size);
        if (fs::is_regular_file(meta_path)) {
            json meta = json::parse(slurp(meta_path), nullptr, false);
            if (meta.is_discarded() || !meta.is_object()) {
                scan.diagnostics.push_back(meta_path.string() + ": not a JSON object");
                continue;
            }
            bool ok = true;
            for (const auto& [key, value] : meta.items()) {
                if (key != "paper_id" && key != "problem_window" && key != "ground_truth_available" && key != "tags") {
                    scan.diagnostics.push_back(meta_path.string() + ": unknown key '" + key + "'");
                    ok = false;
                }
            }
            try {
                if (meta.contains("paper_id")) entry.paper_id = meta["paper_id"].get<std::string>();
                if (meta.contains("problem_window")) {
                    const auto window = meta["problem_window"].get<long long>();
                    if (window <= 0 || static_cast<std::uintmax_t>(window) > size) {
                        scan.diagnostics.push_back(meta_path.string() + ": problem_window " + std::to_string(window) +
                                                   " outside (0, " + std::to_string(size) + "]");
                        ok = false;
                    } else {
                        entry.meta.problem_window = static_cast<std::size_t>(window);
                    }
                }
                if (meta.contains("ground_truth_available")) {
                    entry.meta.ground_truth_available = meta["ground_truth_available"].get<bool>();
                }
                if (meta.contains("tags")) entry.meta.tags = meta["tags"].get<std::vector<std::string>>();
            } catch (const json::exception& e) {
                scan.diagnostics.push_back(meta_path.string() + ": " + e.what());
                ok = false;
            }
            if (!ok) continue;
        } else {
            scan.warnings.push_back(dir.string() + ": no meta.json, using defaults");
        }
        if (entry.paper_id.empty()) {
            scan.diagnostics.push_back(dir.string() + ": empty paper_id");
            continue;
        }
        auto [it, inserted] = claimed.emplace(entry.paper_id, dir);
        if (!inserted) {
            throw Error(ErrorCode::CorpusError, "duplicate paper_id '" + entry.paper_id + "' in " + it->second.string() +
                                                    " and " + dir.string());
        }
        scan.entries.push_back(std::move(entry));
    }
    std::sort(scan.entries.begin(), scan.entries.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.paper_id < b.paper_id; });
    if (scan.entries.empty() && scan.diagnostics.empty()) {
        scan.warnings.push_back(directory.string() + ": corpus is empty");
    }
    return scan;
}

std::string read_paper_text(const CorpusEntry& entry) { return slurp(entry.text_path); }

}  // namespace gauntlet::store
