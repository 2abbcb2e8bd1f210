#include "gauntlet/cli/cli.hpp"

namespace gauntlet::cli {

namespace {

using backend::MockRule;

MockRule rule(std::string role, std::vector<std::string> responses, std::string contains = {}) {
    MockRule r;
    r.role_pattern = std::move(role);
    r.prompt_contains = std::move(contains);
    r.responses = std::move(responses);
    return r;
}

constexpr const char* kProblem =
    "[CONTEXT]: {{pick:Out-of-order cores running pointer-heavy server code|Multicore processors sharing a "
    "last-level cache under mixed workloads|Accelerators streaming large tensors through on-chip buffers}}.\n"
    "[SYMPTOM]: {{int:22:48}}% of cycles are spent stalled on {{pick:long-latency memory accesses|queueing at a "
    "shared resource|serialized dependent operations}}, and throughput flattens beyond {{int:4:16}} concurrent "
    "requests.\n"
    "[CONSTRAINT]: Any fix must fit within {{int:2:9}} KB of added state and must not lengthen the critical path.\n";

constexpr const char* kExpansion =
    "[CONTEXT]: {{pick:Chiplet-based servers with a shared interposer|Edge devices with a tight energy "
    "envelope|Virtualized hosts running many small tenants}} that inherit the structure of the parent design.\n"
    "[SYMPTOM]: Measured overhead reaches {{int:12:40}}% once the working set exceeds {{int:2:64}} MB.\n"
    "[CONSTRAINT]: The remedy must remain transparent to software and cost under {{int:1:5}}% area.\n";

constexpr const char* kArchitect =
    "Title of Paper: {{pick:Stride Ledger|Reuse Horizon|Queue Sentinel|Slack Broker|Phase Lattice}}: "
    "{{pick:Predictive|Adaptive|Cooperative}} {{pick:Staging|Throttling|Partitioning}} for {{pick:Stalled|Contended|"
    "Serialized}} Pipelines\n"
    "The Mechanism: A small tagged table of {{int:64:512}} entries observes {{pick:miss addresses|queue "
    "occupancy|dependence chains}} at retirement, learns a {{pick:confidence counter|saturating score|two-bit "
    "state}} per region, and steers {{pick:issue priority|fill placement|request admission}} accordingly.\n"
    "Why it Works: The table captures recurring structure that the baseline discards, so the expensive event is "
    "anticipated {{int:10:60}} cycles earlier without touching the critical path.\n"
    "Evaluation Plan: Cycle-level simulation over {{int:20:40}} server and analytics workloads, compared against "
    "the best prior scheme at equal storage, with sensitivity sweeps on table size.\n";

constexpr const char* kSpec =
    "```json\n"
    "{\"variables\": ["
    "{\"symbol\": \"L_hit\", \"meaning\": \"hit latency\", \"units\": \"cycles\"}, "
    "{\"symbol\": \"L_miss\", \"meaning\": \"miss penalty\", \"units\": \"cycles\"}, "
    "{\"symbol\": \"h\", \"meaning\": \"hit rate\", \"units\": \"fraction\"}, "
    "{\"symbol\": \"AMAT\", \"meaning\": \"average access time\", \"units\": \"cycles\"}], "
    "\"relationships\": [\"AMAT = L_hit + (1 - h) * L_miss\"], "
    "\"constraints\": [\"0 <= h <= 1\"], "
    "\"calibration_data\": [{\"source\": \"values stated in the document\", "
    "\"values\": {\"L_hit\": 4, \"L_miss\": 200, \"h\": 0.9}}]}\n"
    "```\n";

constexpr const char* kProgram =
    "```python\n"
    "L_hit = 4.0\n"
    "L_miss = 200.0\n"
    "base = L_hit + (1 - 0.90) * L_miss\n"
    "for h in (0.90, 0.95, 0.98):\n"
    "    amat = L_hit + (1 - h) * L_miss\n"
    "    print(f\"amat_h{int(round(h * 100))}={amat:.2f}\")\n"
    "print(f\"speedup={base / (L_hit + (1 - 0.95) * L_miss):.3f}\")\n"
    "```\n";

constexpr const char* kInterpretation =
    "## Model Structure\nAverage access time as hit latency plus the miss share of the miss penalty.\n"
    "## Assumptions\nMisses are independent and the penalty does not depend on load.\n"
    "## Findings\nRaising the hit rate from 90% to 95% cuts average access time from 24 to 14 cycles.\n"
    "## Magic Gaps\nThe claimed hit-rate gain is plausible only if the predictor reaches about 95% accuracy.\n";

constexpr const char* kReview =
    "## Mechanism\nThe structure works as described; its storage budget of {{int:2:12}} KB is credible.\n"
    "## Methodology\nThe evaluation covers {{int:10:30}} workloads, but the baseline is tuned less carefully.\n"
    "## Feasibility\nTiming closure looks achievable; verification cost is the main risk.\n"
    "## Verdict\n{{pick:Accept with revisions|Weak accept|Accept}}.\n"
    "STANCE: {{pick:The idea is sound but the evidence is thinner than claimed.|A real contribution limited by "
    "its evaluation.|Worth building if the corner cases hold up.}}\n";

constexpr const char* kSynthesis =
    "## Agreements\n- The mechanism targets a real bottleneck.\n- The storage cost is modest.\n"
    "## Tensions\n- The workload analyst doubts the benchmarks while the micro-architect accepts them.\n"
    "## Core Insight\nThe gain comes from exposing structure that the baseline already computes and discards.\n"
    "## Frank Limitations\nResults rest on one simulator and a narrow workload mix.\n";

std::vector<MockRule> build() {
    std::vector<MockRule> r;
    // Ideation.
    r.push_back(rule("extractor", {kProblem}));
    r.push_back(rule("repair", {kProblem}));
    r.push_back(rule("qc", {"GENERALITY_SCORE: {{int:7:9}}\nCRITIQUE: The symptom names a measurable effect that "
                            "recurs across many designs.\n"}));
    r.push_back(rule("leak-judge", {"REVEALS_MECHANISM: NO\nEVIDENCE: none\n"}));
    r.push_back(rule("architect", {kArchitect}));
    r.push_back(rule("validator", {"SIMILARITY: {{pick:EXACT_MATCH|FUNCTIONAL_EQUIVALENT|DIFFERENT_APPROACH}}\n"
                                   "QUALITY: ISCA_WORTHY\nJUSTIFICATION: The proposal addresses the stated symptom "
                                   "with a buildable structure.\n"}));
    r.push_back(rule("expander-*", {kExpansion}));
    // Panel: topic detection keyed on words that occur in the document but not
    // in the persona vocabulary listed by the prompt.
    r.push_back(rule("topic-detector", {"TOPICS: cache coherence protocols, memory consistency, multicore\n"},
                     "snoop"));
    r.push_back(rule("topic-detector", {"TOPICS: systolic array architectures, dnn accelerators, dataflow\n"},
                     "weight-stationary"));
    r.push_back(rule("topic-detector", {"TOPICS: prefetching, memory hierarchy, memory bandwidth\n"}, "stride"));
    r.push_back(rule("topic-detector", {"TOPICS: analytical modeling, performance modeling\n"}));
    r.push_back(rule("reviewer", {kReview}));
    r.push_back(rule("synthesizer", {kSynthesis}));
    // Model forge.
    r.push_back(rule("spec-extractor", {kSpec}));
    r.push_back(rule("spec-repairer", {kSpec}));
    r.push_back(rule("spec-verifier", {"APPROVED: YES\nISSUES:\n- none\n"}));
    r.push_back(rule("model-implementer", {kProgram}));
    r.push_back(rule("model-repairer", {kProgram}));
    r.push_back(rule("functional-verifier", {"APPROVED: YES\nISSUES:\n- none\n"}));
    r.push_back(rule("directive-verifier", {"APPROVED: YES\nISSUES:\n- none\n"}));
    r.push_back(rule("interpreter", {kInterpretation}));
    r.push_back(rule("selector", {"RUN 1: CORRECTNESS={{int:6:9}} INSIGHT={{int:6:9}}\n"
                                  "RUN 2: CORRECTNESS={{int:6:9}} INSIGHT={{int:6:9}}\n"
                                  "RUN 3: CORRECTNESS={{int:6:9}} INSIGHT={{int:6:9}}\n"
                                  "RUN 4: CORRECTNESS={{int:6:9}} INSIGHT={{int:6:9}}\n"
                                  "RUN 5: CORRECTNESS={{int:6:9}} INSIGHT={{int:6:9}}\n"
                                  "JUSTIFICATION: The chosen run has the clearest calibration.\n"}));
    // Funnel.
    r.push_back(rule("tier0-filter", {"DECISION: PASS\nVIOLATION: none\nREASON: No checklist item is violated.\n"}));
    r.push_back(rule("tier1-*", {"SCORES:\n- novelty: {{int:6:9}}\n- feasibility: {{int:6:9}}\n"
                                 "- evaluation-rigor: {{int:6:9}}\n- system-impact: {{int:6:9}}\n"
                                 "APPROVE: YES\nISSUES:\n- none\n"}));
    return r;
}

}  // namespace

const backend::MockScript& default_mock_script() {
    static const backend::MockScript script{build()};
    return script;
}

}  // namespace gauntlet::cli
