#include "gauntlet/ideation/prompts.hpp"

#include "gauntlet/util/text.hpp"

namespace gauntlet::ideation::prompts {

using backend::AgentRequest;

namespace {

AgentRequest make(std::string_view role, std::string system, std::string user, double temperature, std::string tag) {
    AgentRequest r;
    r.role_name = std::string(role);
    r.system_prompt = std::move(system);
    r.user_prompt = std::move(user);
    r.temperature = Temperature{temperature};
    r.request_tag = std::move(tag);
    return r;
}

constexpr std::string_view kCanonicalFormat =
    "[CONTEXT]: The system configuration and workload characteristics under which the problem manifests.\n"
    "[SYMPTOM]: The observed performance bottleneck with quantitative evidence (utilization rates, latency "
    "breakdowns, throughput limits).\n"
    "[CONSTRAINT]: What prevents naive solutions from working, i.e. the reason this problem is hard.\n";

constexpr std::string_view kProblemReply =
    "Reply with exactly three labelled fields and nothing else:\n"
    "[CONTEXT]: ...\n[SYMPTOM]: ... (must cite at least one number)\n[CONSTRAINT]: ...\n";

constexpr std::string_view kArchitectSystem =
    "[EXPERIMENTAL CONTEXT]\n"
    "You are an AI agent testing \"Automated Architectural Invention.\"\n"
    "You are a Distinguished Researcher aiming for an ISCA/MICRO paper.\n"
    "You are receiving a problem description from a \"Clean Room.\"\n";

constexpr std::string_view kArchitectTask =
    "[YOUR TASK]\n"
    "1. Analyze the root cause.\n"
    "2. Propose a NOVEL hardware micro-architecture mechanism to solve it.\n"
    "   - Do NOT propose incremental tuning.\n"
    "   - Be specific about hardware structures (tables, buffers, logic).\n"
    "3. Outline the experimental design.\n";

constexpr std::string_view kArchitectOutput =
    "[OUTPUT REQUIREMENTS]\n"
    "- Title of Paper: (Catchy, Academic)\n"
    "- The Mechanism: How does it work? (Specific hardware details)\n"
    "- Why it Works: First-principles reasoning.\n"
    "- Evaluation Plan: Baselines and Metrics.\n";

constexpr std::string_view kValidatorSystem =
    "[EXPERIMENTAL CONTEXT]\n"
    "You are a Senior Technical Reviewer for a top Computer Architecture\n"
    "conference (ISCA/MICRO). We are conducting a scientific experiment on\n"
    "\"Automated Discovery.\" An AI agent (The Candidate) has attempted to\n"
    "invent a novel architectural mechanism based ONLY on a problem\n"
    "description, without seeing the solution.\n";

constexpr std::string_view kValidatorTask =
    "[YOUR TASK]\n"
    "Evaluate the [CANDIDATE SOLUTION] against the [GROUND TRUTH PAPER]\n"
    "on two independent axes:\n"
    "1. Similarity: Did the AI re-discover the paper's specific idea?\n"
    "2. Quality: Is the AI's idea a high-quality, publication-worthy\n"
    "   contribution, even if different?\n";

constexpr std::string_view kSimilarityAxis =
    "[AXIS 1: SIMILARITY]\n"
    "- EXACT_MATCH: Functionally identical mechanism (e.g., both use PC-based hashing to index a table).\n"
    "- FUNCTIONAL_EQUIVALENT: Different implementation, but exploits the exact same architectural "
    "insight/phenomenon.\n"
    "- DIFFERENT_APPROACH: Solves the problem using a completely different architectural lever (e.g., paper "
    "used partitioning; candidate used replacement policy).\n";

constexpr std::string_view kQualityAxis =
    "[AXIS 2: QUALITY]\n"
    "- ISCA_WORTHY: A novel, non-obvious mechanism that is physically realizable and likely to work.\n"
    "- INCREMENTAL: A valid engineering fix (e.g., \"increase buffer size\"), but lacks research novelty.\n"
    "- FLAWED: The mechanism violates hardware constraints, causality, or simply wouldn't work.\n";

constexpr std::string_view kVertical =
    "[ROLE]\n"
    "You are a \"Chief Systems Architect\" at a hyperscale cloud provider.\n"
    "You think in terms of Amdahl's Law, utilization rates, and system\n"
    "bottlenecks. You are paranoid: you know that solving one bottleneck\n"
    "just exposes the next one.\n\n"
    "[YOUR TASK]\n"
    "Assume \"The Fix\" works perfectly and is deployed at scale.\n"
    "Identify the IMMEDIATE NEXT SYSTEM BOTTLENECK that will emerge.\n\n"
    "[GUIDANCE - Apply Amdahl's Law]\n"
    "- If Compute is fixed, look at Memory Bandwidth\n"
    "- If Bandwidth is fixed, look at Latency or Synchronization\n"
    "- If Performance is fixed, look at Power Density or Reliability\n"
    "- If the chip is perfect, look at the Interconnect or the Compiler\n"
    "- If software is optimized, look at the Operating System or Runtime\n";

constexpr std::string_view kLateral =
    "[ROLE]\n"
    "You are a \"Polymath Applied Mathematician.\"\n"
    "You do not care about hardware details (buffers, wires, caches).\n"
    "You care about Abstract Structural Isomorphisms.\n"
    "You see patterns that repeat across biology, finance, physics,\n"
    "and computing.\n\n"
    "[YOUR TASK]\n"
    "Identify a DIFFERENT DOMAIN that suffers from a mathematically\n"
    "identical problem. Explain how the \"Solution Mechanism\" could be\n"
    "ported to that domain.\n\n"
    "[GUIDANCE - Look for Mathematical Patterns]\n"
    "Common isomorphisms to search for:\n"
    "- Sparsity: Genomics (sequence alignment), Finance (sparse matrices)\n"
    "- All-to-All Communication: Physics (N-body), Databases (distributed joins)\n"
    "- Tail Latency: Quant Finance (order books), Web Services (microservices)\n"
    "- Entropy/Compression: Video Encoding, Network Traffic Shaping\n"
    "- Synchronization: Distributed Consensus, Multi-Agent Robotics\n";

constexpr std::string_view kFoundational =
    "[ROLE]\n"
    "You are a \"Contrarian Physicist\" and First-Principles Thinker.\n"
    "You hate complexity. You believe most \"architectural fixes\" are\n"
    "just band-aids on broken algorithms.\n"
    "You question the premise of the problem itself.\n\n"
    "[YOUR TASK]\n"
    "Attack the assumption. Why are we solving this problem at all?\n"
    "Propose a research direction that ELIMINATES THE NEED for this\n"
    "optimization entirely.\n\n"
    "[GUIDANCE - Question the Premise]\n"
    "Examples of foundational rethinking:\n"
    "- \"Don't optimize the cache; remove data movement\" -> Compute-in-memory\n"
    "- \"Don't accelerate multiply; change math to additions\" -> Log number systems\n"
    "- \"Don't fix branch predictor; use predication\" -> Dataflow architectures\n"
    "- \"Don't compress data; change representation\" -> Sparse formats\n";

}  // namespace

std::string expander_role(ExpansionMode mode) { return "expander-" + text::to_lower(to_string(mode)); }

AgentRequest extraction(std::string_view window, std::string tag) {
    std::string system =
        "You extract architecture research problems from paper excerpts. State the problem the paper "
        "attacks and redact every trace of the solution it proposes: no mechanism names, no structures, "
        "no results of the proposed design.\n\nCanonical problem format:\n";
    system += kCanonicalFormat;
    std::string user = "[PAPER EXCERPT]\n";
    user += window;
    user += "\n[END EXCERPT]\n\n";
    user += kProblemReply;
    return make(kExtractorRole, std::move(system), std::move(user), 0.0, std::move(tag));
}

AgentRequest generality(const ProblemStatement& problem, std::string tag) {
    std::string system =
        "You grade extracted problem statements. Rate from 1 to 10 how generally the symptom is "
        "formulated: 10 means it describes a bottleneck many designs share, 1 means it only makes sense "
        "for one specific proposal.";
    std::string user = "[PROBLEM]\n" + problem.render() +
                       "\n\nReply with:\nGENERALITY_SCORE: <integer 1-10>\nCRITIQUE: <what makes it over-specific>\n";
    return make(kQcRole, std::move(system), std::move(user), 0.0, std::move(tag));
}

AgentRequest repair(const ProblemStatement& problem, std::string_view critique, std::string tag) {
    std::string system = "You rewrite over-specific problem statements so the symptom describes the general "
                         "bottleneck. Keep the quantitative evidence.\n\nCanonical problem format:\n";
    system += kCanonicalFormat;
    std::string user = "[PROBLEM]\n" + problem.render() + "\n\n[CRITIQUE]\n" + std::string(critique) + "\n\n";
    user += kProblemReply;
    return make(kRepairRole, std::move(system), std::move(user), 0.0, std::move(tag));
}

AgentRequest leak_judge(const ProblemStatement& problem, std::string_view full_text, std::string tag) {
    std::string system =
        "You audit clean-room problem statements. Answer one question: does the problem text reveal the "
        "mechanism the paper proposes?";
    std::string user = "[PROBLEM]\n" + problem.render() + "\n\n[PAPER]\n" + std::string(full_text) +
                       "\n[END PAPER]\n\nReply with:\nREVEALS_MECHANISM: YES or NO\nEVIDENCE: <quote or none>\n";
    return make(kLeakJudgeRole, std::move(system), std::move(user), 0.0, std::move(tag));
}

AgentRequest architect(const ProblemStatement& problem, double temperature, std::string_view domain_focus,
                       std::string_view feedback, std::string tag) {
    std::string user(kArchitectTask);
    user += "\n[PERFORMANCE REPORT]\n" + problem.render() + "\n";
    if (!domain_focus.empty()) {
        user += "\n[DOMAIN FOCUS]\n";
        user += domain_focus;
        user += "\n";
    }
    if (!feedback.empty()) {
        user += "\n[PRIOR EVALUATION FEEDBACK]\n";
        user += feedback;
        user += "\n";
    }
    user += "\n";
    user += kArchitectOutput;
    return make(kArchitectRole, std::string(kArchitectSystem), std::move(user), temperature, std::move(tag));
}

AgentRequest validator(const MechanismProposal& proposal, std::optional<std::string_view> ground_truth,
                       std::string tag) {
    std::string user;
    if (ground_truth) {
        user += kValidatorTask;
        user += "\n";
        user += kSimilarityAxis;
        user += "\n";
        user += kQualityAxis;
        user += "\n[CANDIDATE SOLUTION]\n" + proposal.render() + "\n\n[GROUND TRUTH PAPER]\n";
        user += *ground_truth;
        user += "\n[END GROUND TRUTH PAPER]\n\nReply with:\nSIMILARITY: <one similarity class>\n"
                "QUALITY: <one quality class>\nJUSTIFICATION: <reasoning>\n";
    } else {
        user += "[YOUR TASK]\nNo ground-truth paper exists for this problem. Judge the [CANDIDATE SOLUTION] "
                "on quality alone.\n\n";
        user += kQualityAxis;
        user += "\n[CANDIDATE SOLUTION]\n" + proposal.render() +
                "\n\nReply with:\nQUALITY: <one quality class>\nJUSTIFICATION: <reasoning>\n";
    }
    return make(kValidatorRole, std::string(kValidatorSystem), std::move(user), 0.0, std::move(tag));
}

AgentRequest expander(ExpansionMode mode, const ProblemStatement& problem, const MechanismProposal& fix,
                      std::string tag) {
    std::string_view system = mode == ExpansionMode::Vertical  ? kVertical
                              : mode == ExpansionMode::Lateral ? kLateral
                                                               : kFoundational;
    std::string user = "[SOLVED PROBLEM]\n" + problem.render() + "\n\n[THE FIX / SOLUTION MECHANISM]\n" +
                       fix.render() + "\n\n[OUTPUT REQUIREMENTS]\nState the new problem in canonical form.\n";
    user += kCanonicalFormat;
    user += "\n";
    user += kProblemReply;
    return make(expander_role(mode), std::string(system), std::move(user), 0.7, std::move(tag));
}

}  // namespace gauntlet::ideation::prompts
