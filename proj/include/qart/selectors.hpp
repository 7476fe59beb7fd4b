#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "qart/qgram.hpp"
#include "qart/testcase.hpp"

namespace qart {

using TargetId = std::string;
using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

struct ExecutionOutcome {
    bool failed = false;
    std::vector<TargetId> covered_targets;
};

class CandidateGenerator {
public:
    virtual ~CandidateGenerator() = default;
    // Returns exactly `count` fresh candidates; deterministic given the rng state.
    virtual std::vector<TestCase> sample(std::size_t count, Rng& rng) = 0;
};

class Executor {
public:
    virtual ~Executor() = default;
    virtual ExecutionOutcome execute(const TestCase& test) = 0;
    // Size of the coverage universe, or 0 when the SUT has none.
    virtual std::size_t total_targets() const { return 0; }
};

struct InstrumentationCounters {
    std::uint64_t distance_calls = 0;
    std::uint64_t diversity_evals = 0;
    std::uint64_t executions = 0;
    std::chrono::nanoseconds wall_selection_time{0};
    std::chrono::nanoseconds wall_execution_time{0};
};

struct StoppingCriterion {
    enum class Kind { max_executions, first_failure, wall_budget, all_targets_covered };

    Kind kind = Kind::max_executions;
    std::uint64_t max_executions = 0;  // doubles as the censoring cap for first_failure (0 = uncapped)
    std::chrono::nanoseconds budget{0};

    static StoppingCriterion after_executions(std::uint64_t n);
    static StoppingCriterion on_first_failure(std::uint64_t cap = 0);
    static StoppingCriterion within(std::chrono::nanoseconds budget);
    static StoppingCriterion until_all_covered();
};

struct IterationLog {
    std::size_t candidate_count = 0;
    std::size_t chosen_index = 0;
    double score = 0.0;  // NaN when the strategy does not score
    std::size_t test_length = 0;
    bool failed = false;
    std::size_t covered_after = 0;  // cumulative distinct targets
};

struct RunRecord {
    std::string strategy;
    std::uint64_t seed = 0;
    std::size_t w_size = 1;
    std::size_t q = 2;
    TokenizeMode mode = TokenizeMode::sequence_only;
    DiversityMetric diversity = DiversityMetric::entropy;

    std::vector<TestCase> executed;
    std::vector<IterationLog> iterations;
    InstrumentationCounters counters;
    std::unordered_set<TargetId> covered;
    QGramCounts aggregate;  // final archive aggregate (q-gram strategy only)

    bool saw_failure = false;
    std::uint64_t executions_to_first_failure = 0;  // 0 when no failure occurred
    bool aborted = false;                           // executor raised mid-run
    std::string abort_reason;

    nlohmann::json to_json() const;
};

// Plain random testing: sample one test, execute, repeat.
RunRecord run_random(CandidateGenerator& gen, Executor& exec,
                     const StoppingCriterion& stop, Rng& rng, std::uint64_t seed = 0);

// ART with pairwise distance: seed the archive with one random executed test,
// then each iteration sample w_size candidates, compute every candidate's
// minimum edit distance to the archive and execute the maxi-min candidate.
RunRecord run_art_dist(CandidateGenerator& gen, Executor& exec,
                       const StoppingCriterion& stop, std::size_t w_size, Rng& rng,
                       std::uint64_t seed = 0,
                       TokenizeMode mode = TokenizeMode::sequence_only);

// ART with q-gram aggregation: the archive is summarized by its q-gram
// counts; candidates are scored by the diversity of the aggregate extended
// with their own counts, and the argmax candidate's counts are folded in
// after execution.
RunRecord run_art_qgram(CandidateGenerator& gen, Executor& exec,
                        const StoppingCriterion& stop, std::size_t w_size,
                        std::size_t q, TokenizeMode mode, DiversityMetric diversity,
                        Rng& rng, std::uint64_t seed = 0,
                        const TokenizeOptions& opts = {});

// Index of the maximal score; ties break toward the lowest index
// (sampling order), so selection is deterministic and seed-stable.
std::size_t select_argmax(std::span<const double> scores);

enum class BreakevenAlgo { dist, qgram };

// Minimum ratio t_e / t_d (or t_e / t_h) for ART to beat random testing under
// the doubled-theta assumption. Throws std::domain_error outside 0 < theta < 0.5.
double breakeven_factor(double theta, std::size_t w_size, BreakevenAlgo algo);

// Closed forms for the instrumentation counters after rho executions.
constexpr std::uint64_t expected_distance_calls(std::uint64_t w, std::uint64_t rho) {
    return rho == 0 ? 0 : w * rho * (rho - 1) / 2;
}
constexpr std::uint64_t expected_diversity_evals(std::uint64_t w, std::uint64_t rho) {
    return rho == 0 ? 0 : w * (rho - 1);
}

}  // namespace qart
