#include "qart/selectors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "qart/distance.hpp"

namespace qart {

StoppingCriterion StoppingCriterion::after_executions(std::uint64_t n) {
    return {Kind::max_executions, n, std::chrono::nanoseconds{0}};
}

StoppingCriterion StoppingCriterion::on_first_failure(std::uint64_t cap) {
    return {Kind::first_failure, cap, std::chrono::nanoseconds{0}};
}

StoppingCriterion StoppingCriterion::within(std::chrono::nanoseconds budget) {
    return {Kind::wall_budget, 0, budget};
}

StoppingCriterion StoppingCriterion::until_all_covered() {
    return {Kind::all_targets_covered, 0, std::chrono::nanoseconds{0}};
}

std::size_t select_argmax(std::span<const double> scores) {
    if (scores.empty()) throw std::invalid_argument("select_argmax: empty candidate set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

double breakeven_factor(double theta, std::size_t w_size, BreakevenAlgo algo) {
    if (!(theta > 0.0) || !(theta < 0.5)) {
        throw std::domain_error("breakeven_factor: theta must lie in (0, 0.5)");
    }
    const double half_life = 1.0 / (2.0 * theta);  // expected executions at doubled theta
    const double w = static_cast<double>(w_size);
    if (algo == BreakevenAlgo::dist) {
        return w * (half_life - 1.0) / 2.0;
    }
    return w * (half_life - 1.0) * (2.0 * theta);
}

namespace {

constexpr double kNoScore = std::numeric_limits<double>::quiet_NaN();

// Shared bookkeeping for the three run loops.
struct RunState {
    RunRecord record;
    Executor* exec = nullptr;
    std::size_t total_targets = 0;
    Clock::time_point started;

    explicit RunState(Executor& e, std::string strategy, std::uint64_t seed) {
        exec = &e;
        record.strategy = std::move(strategy);
        record.seed = seed;
        total_targets = e.total_targets();
        started = Clock::now();
    }

    bool stop_satisfied(const StoppingCriterion& stop) const {
        const auto& c = record.counters;
        switch (stop.kind) {
            case StoppingCriterion::Kind::max_executions:
                return c.executions >= stop.max_executions;
            case StoppingCriterion::Kind::first_failure:
                return record.saw_failure ||
                       (stop.max_executions > 0 && c.executions >= stop.max_executions);
            case StoppingCriterion::Kind::wall_budget:
                return Clock::now() - started >= stop.budget;
            case StoppingCriterion::Kind::all_targets_covered:
                return record.covered.size() >= total_targets;
        }
        return true;
    }

    // Returns false when the executor raised and the run must abort.
    bool execute_selected(const TestCase& test, std::size_t candidate_count,
                          std::size_t chosen, double score) {
        IterationLog log;
        log.candidate_count = candidate_count;
        log.chosen_index = chosen;
        log.score = score;
        log.test_length = test.length();

        const auto t0 = Clock::now();
        ExecutionOutcome outcome;
        bool ok = true;
        try {
            outcome = exec->execute(test);
        } catch (const std::exception& e) {
            record.aborted = true;
            record.abort_reason = e.what();
            ok = false;
        }
        record.counters.wall_execution_time += Clock::now() - t0;
        if (!ok) return false;

        record.counters.executions += 1;
        for (auto& t : outcome.covered_targets) {
            record.covered.insert(std::move(t));
        }
        if (outcome.failed && !record.saw_failure) {
            record.saw_failure = true;
            record.executions_to_first_failure = record.counters.executions;
        }
        log.failed = outcome.failed;
        log.covered_after = record.covered.size();
        record.iterations.push_back(std::move(log));
        record.executed.push_back(test);
        return true;
    }
};

void check_coverage_stop(const StoppingCriterion& stop, const Executor& exec) {
    if (stop.kind == StoppingCriterion::Kind::all_targets_covered &&
        exec.total_targets() == 0) {
        throw std::invalid_argument(
            "all_targets_covered requires an executor with a coverage universe");
    }
}

// Token-id interning so the dist DP compares integers, not strings.
struct TokenInterner {
    std::unordered_map<std::string, std::uint32_t> ids;

    std::vector<std::uint32_t> intern(const std::vector<Token>& tokens) {
        std::vector<std::uint32_t> out;
        out.reserve(tokens.size());
        for (const auto& t : tokens) {
            auto [it, inserted] =
                ids.try_emplace(t.text, static_cast<std::uint32_t>(ids.size()));
            out.push_back(it->second);
        }
        return out;
    }
};

}  // namespace

RunRecord run_random(CandidateGenerator& gen, Executor& exec,
                     const StoppingCriterion& stop, Rng& rng, std::uint64_t seed) {
    check_coverage_stop(stop, exec);
    RunState st(exec, "rand", seed);
    st.record.w_size = 1;

    while (!st.stop_satisfied(stop)) {
        const auto t0 = Clock::now();
        auto batch = gen.sample(1, rng);
        st.record.counters.wall_selection_time += Clock::now() - t0;
        if (!st.execute_selected(batch.front(), 1, 0, kNoScore)) break;
    }
    return st.record;
}

RunRecord run_art_dist(CandidateGenerator& gen, Executor& exec,
                       const StoppingCriterion& stop, std::size_t w_size, Rng& rng,
                       std::uint64_t seed, TokenizeMode mode) {
    if (w_size == 0) throw std::invalid_argument("run_art_dist: w_size must be >= 1");
    check_coverage_stop(stop, exec);
    RunState st(exec, "dist", seed);
    st.record.w_size = w_size;
    st.record.mode = mode;

    TokenInterner interner;
    std::vector<std::vector<std::uint32_t>> archive_tokens;

    // Seed the archive with one random executed test.
    {
        const auto t0 = Clock::now();
        auto batch = gen.sample(1, rng);
        st.record.counters.wall_selection_time += Clock::now() - t0;
        if (!st.execute_selected(batch.front(), 1, 0, kNoScore)) return st.record;
        archive_tokens.push_back(interner.intern(tokenize(batch.front(), mode)));
    }

    while (!st.stop_satisfied(stop)) {
        const auto t0 = Clock::now();
        auto candidates = gen.sample(w_size, rng);
        std::vector<double> scores(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const auto cand = interner.intern(tokenize(candidates[i], mode));
            std::size_t best = std::numeric_limits<std::size_t>::max();
            for (const auto& member : archive_tokens) {
                best = std::min(best, edit_distance_ids(cand, member));
            }
            st.record.counters.distance_calls += archive_tokens.size();
            scores[i] = static_cast<double>(best);
        }
        const std::size_t chosen = select_argmax(scores);
        st.record.counters.wall_selection_time += Clock::now() - t0;

        if (!st.execute_selected(candidates[chosen], candidates.size(), chosen,
                                 scores[chosen])) {
            break;
        }
        archive_tokens.push_back(interner.intern(tokenize(candidates[chosen], mode)));
    }
    return st.record;
}

RunRecord run_art_qgram(CandidateGenerator& gen, Executor& exec,
                        const StoppingCriterion& stop, std::size_t w_size,
                        std::size_t q, TokenizeMode mode, DiversityMetric diversity,
                        Rng& rng, std::uint64_t seed, const TokenizeOptions& opts) {
    if (w_size == 0) throw std::invalid_argument("run_art_qgram: w_size must be >= 1");
    if (q == 0) throw std::invalid_argument("run_art_qgram: q must be >= 1");
    check_coverage_stop(stop, exec);
    RunState st(exec, "qgram", seed);
    st.record.w_size = w_size;
    st.record.q = q;
    st.record.mode = mode;
    st.record.diversity = diversity;

    QGramCounts aggregate;

    // Seed the archive and initialize the aggregate from it.
    {
        const auto t0 = Clock::now();
        auto batch = gen.sample(1, rng);
        st.record.counters.wall_selection_time += Clock::now() - t0;
        if (!st.execute_selected(batch.front(), 1, 0, kNoScore)) return st.record;
        aggregate.merge_in(count_qgrams(tokenize(batch.front(), mode, opts), q));
    }

    while (!st.stop_satisfied(stop)) {
        const auto t0 = Clock::now();
        auto candidates = gen.sample(w_size, rng);
        std::vector<QGramCounts> deltas;
        deltas.reserve(candidates.size());
        std::vector<double> scores(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            deltas.push_back(count_qgrams(tokenize(candidates[i], mode, opts), q));
            scores[i] = aggregate.score_with(deltas[i], diversity);
            st.record.counters.diversity_evals += 1;
        }
        const std::size_t chosen = select_argmax(scores);
        st.record.counters.wall_selection_time += Clock::now() - t0;

        if (!st.execute_selected(candidates[chosen], candidates.size(), chosen,
                                 scores[chosen])) {
            break;
        }
        aggregate.merge_in(deltas[chosen]);
    }
    st.record.aggregate = std::move(aggregate);
    return st.record;
}

nlohmann::json RunRecord::to_json() const {
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : iterations) {
        iters.push_back({{"candidates", it.candidate_count},
                         {"chosen", it.chosen_index},
                         {"score", std::isnan(it.score) ? nlohmann::json(nullptr)
                                                        : nlohmann::json(it.score)},
                         {"length", it.test_length},
                         {"failed", it.failed},
                         {"covered", it.covered_after}});
    }
    return {
        {"config",
         {{"strategy", strategy},
          {"w_size", w_size},
          {"q", q},
          {"mode", to_string(mode)},
          {"diversity", diversity == DiversityMetric::entropy ? "entropy" : "gini"}}},
        {"seed", seed},
        {"iterations", std::move(iters)},
        {"counters",
         {{"distance_calls", counters.distance_calls},
          {"diversity_evals", counters.diversity_evals},
          {"executions", counters.executions},
          {"wall_selection_ms",
           std::chrono::duration<double, std::milli>(counters.wall_selection_time).count()},
          {"wall_execution_ms",
           std::chrono::duration<double, std::milli>(counters.wall_execution_time).count()}}},
        {"covered_targets", covered.size()},
        {"saw_failure", saw_failure},
        {"executions_to_first_failure", executions_to_first_failure},
        {"aborted", aborted},
        {"abort_reason", abort_reason},
    };
}

}  // namespace qart
