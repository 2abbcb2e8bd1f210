#include <deque>

#include "gauntlet/ideation/ideation.hpp"
#include "gauntlet/kernel/serialize.hpp"
#include "gauntlet/util/parallel.hpp"

namespace gauntlet::ideation {

std::string_view to_string(CellStatus s) noexcept {
    switch (s) {
        case CellStatus::Complete: return "complete";
        case CellStatus::ExtractionFailed: return "extraction-failed";
        case CellStatus::QcFailed: return "qc-failed";
        case CellStatus::Leaked: return "leaked";
    }
    return "?";
}

Verdict ProblemResult::verdict() const noexcept {
    Verdict best = Verdict::Fail;
    for (const auto& s : slots) {
        if (verdict_rank(s.verdict()) < verdict_rank(best)) best = s.verdict();
    }
    return best;
}

std::optional<std::size_t> ProblemResult::winner() const noexcept {
    const Verdict best = verdict();
    if (!is_viable(best)) return std::nullopt;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].verdict() == best) return i;
    }
    return std::nullopt;
}

std::size_t IdeationReport::excluded() const noexcept {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.counted() ? 0 : 1;
    return n;
}

namespace {

struct Context {
    AgentClient& client;
    const IdeationConfig& config;
    std::vector<double> temps;
};

ProblemResult process_problem(const ProblemStatement& problem, std::optional<std::string_view> ground_truth,
                              std::size_t depth, Context& ctx) {
    ProblemResult out;
    out.problem = problem;
    out.depth = depth;
    auto generated = generate_mechanisms(problem, ctx.temps.size(), ctx.temps, ctx.client, ctx.config.architect);
    out.slots = parallel_map(generated.size(), generated.size(), [&](std::size_t i) {
        SlotResult s;
        s.generation = std::move(generated[i]);
        if (!s.generation.proposal) return s;
        try {
            s.judgment = validate_proposal(*s.generation.proposal, ground_truth, ctx.client);
        } catch (const Error& e) {
            s.validation_error = e.what();
        }
        return s;
    });
    const auto win = out.winner();
    if (!win) return out;
    const auto& slot = out.slots[*win];
    if (ctx.config.expand) {
        out.expansions = expand_frontier(problem, *slot.generation.proposal, *slot.judgment, ctx.client);
    }
    if (depth == 0 && ctx.config.synthesis) {
        try {
            out.synthesis = ctx.config.synthesis(problem, *slot.generation.proposal);
        } catch (const std::exception& e) {
            out.synthesis_error = e.what();
        }
    }
    return out;
}

CellResult run_cell(const ExtractionInput& input, std::size_t run, Context& ctx) {
    CellResult cell;
    cell.paper_id = input.paper_id;
    cell.run = run;
    cell.problem_id = input.paper_id + "-r" + std::to_string(run);

    ProblemStatement problem;
    try {
        problem = extract_problem(input, ctx.client, cell.problem_id);
    } catch (const Error& e) {
        cell.status = CellStatus::ExtractionFailed;
        cell.error = e.what();
        return cell;
    }
    try {
        auto [repaired, report] = qc_generality(problem, ctx.client, ctx.config.generality_threshold);
        problem = std::move(repaired);
        cell.generality = std::move(report);
    } catch (const Error& e) {
        cell.status = CellStatus::QcFailed;
        cell.error = e.what();
        return cell;
    }
    std::optional<std::string_view> ground_truth;
    if (input.ground_truth_available) {
        cell.leakage = check_leakage(problem, input, ctx.client, ctx.config.leakage);
        if (cell.leakage->leaked) {
            cell.status = CellStatus::Leaked;
            cell.error = "problem statement reveals the paper's mechanism";
            return cell;
        }
        ground_truth = input.text;
    }
    cell.result = process_problem(problem, ground_truth, 0, ctx);

    // Expansions have no ground truth; they are judged on quality alone.
    std::deque<std::pair<ProblemStatement, std::size_t>> queue;
    auto enqueue = [&](const ProblemResult& r) {
        if (r.depth + 1 >= ctx.config.recursion_depth) return;
        for (const auto& e : r.expansions) {
            if (e.ok()) queue.emplace_back(*e.new_problem, r.depth + 1);
        }
    };
    enqueue(*cell.result);
    while (!queue.empty()) {
        auto [p, depth] = std::move(queue.front());
        queue.pop_front();
        cell.frontier.push_back(process_problem(p, std::nullopt, depth, ctx));
        enqueue(cell.frontier.back());
    }
    return cell;
}

}  // namespace

IdeationReport run_ideation(std::span<const ExtractionInput> corpus, AgentClient& client, const IdeationConfig& config) {
    if (corpus.empty()) throw Error(ErrorCode::Precondition, "ideation corpus is empty");
    if (config.runs_per_paper == 0) throw Error(ErrorCode::InvalidArgument, "runs_per_paper must be >= 1");
    if (config.n_proposals == 0) throw Error(ErrorCode::InvalidArgument, "n_proposals must be >= 1");
    if (config.recursion_depth == 0) throw Error(ErrorCode::InvalidArgument, "recursion_depth must be >= 1");
    for (const auto& in : corpus) in.validate();

    Context ctx{client, config,
                config.n_proposals == 1 ? temperature_ladder(1, config.temp_lo, config.temp_lo)
                                        : temperature_ladder(config.n_proposals, config.temp_lo, config.temp_hi)};

    std::vector<std::pair<const ExtractionInput*, std::size_t>> cells;
    std::vector<const ExtractionInput*> sorted;
    for (const auto& in : corpus) sorted.push_back(&in);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->paper_id < b->paper_id; });
    for (auto* in : sorted) {
        for (std::size_t r = 1; r <= config.runs_per_paper; ++r) cells.emplace_back(in, r);
    }

    IdeationReport report;
    const auto width = static_cast<std::size_t>(std::max(1, client.max_parallel()));
    report.cells = parallel_map(cells.size(), width,
                                [&](std::size_t i) { return run_cell(*cells[i].first, cells[i].second, ctx); });

    std::vector<Verdict> cell_verdicts, slot_verdicts, frontier_verdicts;
    for (const auto& c : report.cells) {
        if (c.leakage) {
            for (const auto& w : c.leakage->warnings) report.warnings.push_back(c.problem_id + ": " + w);
        }
        if (!c.counted()) {
            report.warnings.push_back(c.problem_id + ": excluded (" + std::string(to_string(c.status)) + ")");
            continue;
        }
        cell_verdicts.push_back(c.result->verdict());
        for (const auto& s : c.result->slots) slot_verdicts.push_back(s.verdict());
        if (!c.result->synthesis_error.empty()) {
            report.warnings.push_back(c.problem_id + ": synthesis failed: " + c.result->synthesis_error);
        }
        for (const auto& f : c.frontier) frontier_verdicts.push_back(f.verdict());
    }
    report.stats = aggregate_stats(cell_verdicts);
    report.proposal_stats = aggregate_stats(slot_verdicts);
    report.frontier_stats = aggregate_stats(frontier_verdicts);
    return report;
}

json to_json(const GeneralityReport& r) {
    return json{{"score", r.score},
                {"initial_score", r.initial_score},
                {"critique", r.critique},
                {"repaired", r.repaired},
                {"below_threshold", r.below_threshold}};
}

json to_json(const LeakReport& r) {
    return json{{"leaked", r.leaked},
                {"lexical", r.lexical},
                {"judge", r.judge ? json(*r.judge) : json(nullptr)},
                {"evidence", r.evidence},
                {"warnings", r.warnings}};
}

json to_json(const ValidationJudgment& j) {
    return json{{"proposal_id", j.proposal_id},
                {"similarity", to_string(j.similarity)},
                {"quality", to_string(j.quality)},
                {"verdict", to_string(j.verdict())},
                {"ground_truth", j.ground_truth},
                {"justification", j.justification}};
}

json to_json(const FrontierExpansion& e) {
    json j{{"parent_problem_id", e.parent_problem_id}, {"mode", to_string(e.mode)}, {"status", e.ok() ? "ok" : "failed"}};
    if (e.new_problem) j["problem"] = *e.new_problem;
    if (!e.error.empty()) j["error"] = e.error;
    return j;
}

json to_json(const ProblemResult& r) {
    json slots = json::array();
    for (const auto& s : r.slots) {
        json j{{"slot", s.generation.slot}, {"temperature", s.generation.temperature}};
        if (s.generation.proposal) {
            j["proposal"] = *s.generation.proposal;
            if (s.judgment) {
                j["status"] = "ok";
                j["judgment"] = to_json(*s.judgment);
            } else {
                j["status"] = "validation-failed";
                j["error"] = s.validation_error;
            }
        } else {
            j["status"] = "generation-failed";
            j["error"] = s.generation.error;
        }
        j["verdict"] = to_string(s.verdict());
        slots.push_back(std::move(j));
    }
    json expansions = json::array();
    for (const auto& e : r.expansions) expansions.push_back(to_json(e));
    json j{{"problem", r.problem},
           {"depth", r.depth},
           {"verdict", to_string(r.verdict())},
           {"slots", std::move(slots)},
           {"expansions", std::move(expansions)}};
    if (const auto w = r.winner()) j["winner"] = r.slots[*w].generation.proposal->id;
    if (r.synthesis) j["synthesis"] = *r.synthesis;
    if (!r.synthesis_error.empty()) j["synthesis_error"] = r.synthesis_error;
    return j;
}

json to_json(const CellResult& c) {
    json j{{"paper_id", c.paper_id},
           {"run", c.run},
           {"problem_id", c.problem_id},
           {"status", to_string(c.status)},
           {"counted", c.counted()}};
    if (!c.error.empty()) j["error"] = c.error;
    if (c.generality) j["generality"] = to_json(*c.generality);
    if (c.leakage) j["leakage"] = to_json(*c.leakage);
    if (c.result) {
        j["verdict"] = to_string(c.result->verdict());
        j["result"] = to_json(*c.result);
    }
    json frontier = json::array();
    for (const auto& f : c.frontier) frontier.push_back(to_json(f));
    j["frontier"] = std::move(frontier);
    return j;
}

json to_json(const IdeationReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells) cells.push_back(to_json(c));
    return json{{"stats", json(r.stats)},
                {"proposal_stats", json(r.proposal_stats)},
                {"frontier_stats", json(r.frontier_stats)},
                {"cells_total", r.cells.size()},
                {"cells_excluded", r.excluded()},
                {"partial", r.partial()},
                {"warnings", r.warnings},
                {"cells", std::move(cells)}};
}

std::vector<json> export_candidates(const IdeationReport& report) {
    std::vector<json> out;
    auto add = [&out](const ProblemResult& r) {
        for (const auto& s : r.slots) {
            if (s.generation.proposal) out.push_back(json{{"proposal", *s.generation.proposal}, {"problem", r.problem}});
        }
    };
    for (const auto& c : report.cells) {
        if (c.result) add(*c.result);
        for (const auto& f : c.frontier) add(f);
    }
    return out;
}

}  // namespace gauntlet::ideation
