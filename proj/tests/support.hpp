#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "gauntlet/backend/client.hpp"
#include "gauntlet/backend/mock.hpp"
#include "gauntlet/kernel/types.hpp"

#ifndef GAUNTLET_SAMPLES_DIR
#define GAUNTLET_SAMPLES_DIR "samples"
#endif

namespace gauntlet::fixture {

namespace fs = std::filesystem;

inline fs::path samples_dir() { return GAUNTLET_SAMPLES_DIR; }

class TempDir {
public:
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "gauntlet-test-XXXXXX").string();
        if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const noexcept { return path_; }
    fs::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Wraps a backend, records every request and tracks peak concurrency.
class RecordingBackend : public backend::Backend {
public:
    explicit RecordingBackend(std::shared_ptr<backend::Backend> inner) : inner_(std::move(inner)) {}

    backend::AgentResponse complete(const backend::AgentRequest& request) override {
        const int now = ++in_flight_;
        int peak = peak_.load();
        while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
        }
        {
            std::lock_guard lock(mu_);
            requests_.push_back(request);
        }
        if (before_) before_(request);
        try {
            auto r = inner_->complete(request);
            --in_flight_;
            return r;
        } catch (...) {
            --in_flight_;
            throw;
        }
    }
    backend::Provenance provenance() const noexcept override { return inner_->provenance(); }

    std::vector<backend::AgentRequest> requests() const {
        std::lock_guard lock(mu_);
        return requests_;
    }
    std::size_t count() const {
        std::lock_guard lock(mu_);
        return requests_.size();
    }
    int peak_in_flight() const noexcept { return peak_.load(); }
    /// Runs inside complete() before the inner backend is called.
    void set_before(std::function<void(const backend::AgentRequest&)> fn) { before_ = std::move(fn); }

private:
    std::shared_ptr<backend::Backend> inner_;
    mutable std::mutex mu_;
    std::vector<backend::AgentRequest> requests_;
    std::atomic<int> in_flight_{0};
    std::atomic<int> peak_{0};
    std::function<void(const backend::AgentRequest&)> before_;
};

inline std::shared_ptr<backend::AgentClient> make_client(std::shared_ptr<backend::Backend> be, int max_parallel = 4) {
    return std::make_shared<backend::AgentClient>(std::move(be), std::make_shared<backend::Transcript>(), max_parallel);
}

inline backend::MockRule rule(std::string role, std::string response, std::string contains = {},
                              std::string tag = {}) {
    backend::MockRule r;
    r.role_pattern = std::move(role);
    r.prompt_contains = std::move(contains);
    r.tag_contains = std::move(tag);
    r.responses = {std::move(response)};
    return r;
}

inline ProblemStatement sample_problem(std::string id = "p1") {
    ProblemStatement p;
    p.id = std::move(id);
    p.source = ProblemSource::Manual;
    p.context = "Server cores running key-value stores.";
    p.symptom = "Load-to-use latency exceeds 180 cycles on 40% of accesses.";
    p.constraint = "Under 4 KB of new state.";
    return p;
}

inline MechanismProposal sample_proposal(std::string id = "m1", std::string problem_id = "p1") {
    MechanismProposal m;
    m.id = std::move(id);
    m.problem_id = std::move(problem_id);
    m.title = "Reuse Ledger";
    m.mechanism = "A 256-entry table tracks reuse distance per region and steers fills.";
    m.rationale = "Reuse distance repeats across phases.";
    m.evaluation_plan = "Simulate 20 workloads against the best prior policy.";
    m.temperature = Temperature{0.7};
    return m;
}

/// Deterministic generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    std::size_t size(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[size(0, v.size() - 1)];
    }
    std::string word() {
        static const std::vector<std::string> words = {"cache", "queue", "table", "entry", "stall", "core", "miss",
                                                       "line", "bank", "port", "fill", "hint", "tag", "way",
                                                       "slice", "burst", "epoch", "phase", "ring", "mesh"};
        return pick(words);
    }
    std::string sentence(std::size_t n) {
        std::string s;
        for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + word();
        return s;
    }
    std::mt19937_64& engine() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace gauntlet::fixture
