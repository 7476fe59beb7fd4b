#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "qart/selectors.hpp"
#include "qart/simulation.hpp"

using namespace qart;

namespace {

// Replays a fixed schedule of candidate batches.
class ScriptedGenerator final : public CandidateGenerator {
public:
    explicit ScriptedGenerator(std::vector<std::vector<TestCase>> batches)
        : batches_(std::move(batches)) {}

    std::vector<TestCase> sample(std::size_t count, Rng&) override {
        REQUIRE(next_ < batches_.size());
        auto batch = batches_[next_++];
        REQUIRE(batch.size() == count);
        return batch;
    }

private:
    std::vector<std::vector<TestCase>> batches_;
    std::size_t next_ = 0;
};

class NeverFails final : public Executor {
public:
    ExecutionOutcome execute(const TestCase&) override { return {}; }
};

// Fails on a fixed set of raw inputs.
class FailsOn final : public Executor {
public:
    explicit FailsOn(std::vector<std::string> bad) : bad_(std::move(bad)) {}
    ExecutionOutcome execute(const TestCase& t) override {
        REQUIRE(t.raw.has_value());
        const bool failed =
            std::find(bad_.begin(), bad_.end(), *t.raw) != bad_.end();
        return {.failed = failed, .covered_targets = {}};
    }

private:
    std::vector<std::string> bad_;
};

// Covers one target per distinct first letter, from a 3-element universe.
class TinyCoverage final : public Executor {
public:
    ExecutionOutcome execute(const TestCase& t) override {
        REQUIRE(t.raw.has_value());
        const std::string target = t.raw->substr(0, 1);
        return {.failed = false, .covered_targets = {target}};
    }
    std::size_t total_targets() const override { return 3; }  // "a", "b", "c"
};

class Throws final : public Executor {
public:
    ExecutionOutcome execute(const TestCase&) override {
        throw std::runtime_error("sut crashed");
    }
};

// Wraps a generator and records every batch it hands out.
class RecordingGenerator final : public CandidateGenerator {
public:
    explicit RecordingGenerator(CandidateGenerator& inner) : inner_(&inner) {}
    std::vector<TestCase> sample(std::size_t count, Rng& rng) override {
        auto batch = inner_->sample(count, rng);
        batches_.push_back(batch);
        return batch;
    }
    const std::vector<std::vector<TestCase>>& batches() const { return batches_; }

private:
    CandidateGenerator* inner_;
    std::vector<std::vector<TestCase>> batches_;
};

TestCase table3_t1() {
    return TestCase::from_actions({{"goToFind", {}}, {"goToIndex", {}}});
}
TestCase table3_w1() {
    return TestCase::from_actions({{"findOwner", {std::string("John")}}, {"goToIndex", {}}});
}
TestCase table3_w2() {
    return TestCase::from_actions({{"goToFind", {}},
                                   {"find", {std::int64_t{1}}},
                                   {"goToFind", {}},
                                   {"find", {std::int64_t{2}}}});
}

std::vector<std::string> executed_raws(const RunRecord& r) {
    std::vector<std::string> out;
    for (const auto& t : r.executed) out.push_back(t.raw.value_or(""));
    return out;
}

}  // namespace

TEST_CASE("run_random: executes exactly the budget, no diversity machinery") {
    sim::StringGenerator gen(10);
    NeverFails exec;
    Rng rng(1);
    const auto rec = run_random(gen, exec, StoppingCriterion::after_executions(50), rng, 1);
    CHECK(rec.counters.executions == 50);
    CHECK(rec.counters.distance_calls == 0);
    CHECK(rec.counters.diversity_evals == 0);
    CHECK(rec.executed.size() == 50);
    CHECK(rec.iterations.size() == 50);
    CHECK(!rec.saw_failure);
}

TEST_CASE("run_random: deterministic under a fixed seed") {
    sim::StringGenerator gen1(12), gen2(12);
    NeverFails exec;
    Rng rng1(99), rng2(99);
    const auto a = run_random(gen1, exec, StoppingCriterion::after_executions(30), rng1, 99);
    const auto b = run_random(gen2, exec, StoppingCriterion::after_executions(30), rng2, 99);
    CHECK(executed_raws(a) == executed_raws(b));
}

TEST_CASE("run_random: first-failure executions follow the geometric law") {
    // theta = 1/10 via the length-1 boundary bug at L = 10
    const auto model = sim::make_length_one_model(10);
    class ModelExec final : public Executor {
    public:
        explicit ModelExec(const sim::FailureModel& m) : m_(&m) {}
        ExecutionOutcome execute(const TestCase& t) override {
            return {.failed = m_->fails(*t.raw), .covered_targets = {}};
        }

    private:
        const sim::FailureModel* m_;
    };
    double total = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        sim::StringGenerator gen(10);
        ModelExec exec(*model);
        Rng rng(1000 + i);
        const auto rec =
            run_random(gen, exec, StoppingCriterion::on_first_failure(), rng, 1000 + i);
        CHECK(rec.saw_failure);
        CHECK(rec.executions_to_first_failure == rec.counters.executions);
        total += static_cast<double>(rec.counters.executions);
    }
    const double mean = total / reps;
    // geometric mean 1/theta = 10, sd ~ 9.49; 3 sigma over 2000 reps
    CHECK(mean == doctest::Approx(10.0).epsilon(0.064));
}

TEST_CASE("run_art_dist: selects w2 on the running example") {
    ScriptedGenerator gen({{table3_t1()}, {table3_w1(), table3_w2()}});
    NeverFails exec;
    Rng rng(1);
    const auto rec = run_art_dist(gen, exec, StoppingCriterion::after_executions(2), 2, rng);
    REQUIRE(rec.executed.size() == 2);
    CHECK(rec.executed[1].actions.size() == 4);  // w2, not w1
    CHECK(rec.iterations[1].chosen_index == 1);
    CHECK(rec.iterations[1].score == doctest::Approx(3.0));  // its min distance
    CHECK(rec.counters.distance_calls == 2);
}

TEST_CASE("run_art_qgram: selects w2 on the running example, both modes") {
    for (const auto mode :
         {TokenizeMode::sequence_only, TokenizeMode::sequence_plus_inputs}) {
        ScriptedGenerator gen({{table3_t1()}, {table3_w1(), table3_w2()}});
        NeverFails exec;
        Rng rng(1);
        const auto rec = run_art_qgram(gen, exec, StoppingCriterion::after_executions(2), 2,
                                       2, mode, DiversityMetric::entropy, rng);
        REQUIRE(rec.executed.size() == 2);
        CHECK(rec.executed[1].actions.size() == 4);
        CHECK(rec.iterations[1].chosen_index == 1);
        const double expected = mode == TokenizeMode::sequence_only ? 1.5 : 2.0;
        CHECK(rec.iterations[1].score == doctest::Approx(expected).epsilon(1e-9));
        CHECK(rec.counters.diversity_evals == 2);
    }
}

TEST_CASE("strategy equivalence at W = 1") {
    NeverFails exec;
    auto run = [&](int which) {
        sim::StringGenerator gen(15);
        Rng rng(7);
        switch (which) {
            case 0:
                return run_random(gen, exec, StoppingCriterion::after_executions(40), rng);
            case 1:
                return run_art_dist(gen, exec, StoppingCriterion::after_executions(40), 1,
                                    rng, 0, TokenizeMode::characters);
            default:
                return run_art_qgram(gen, exec, StoppingCriterion::after_executions(40), 1,
                                     2, TokenizeMode::characters, DiversityMetric::entropy,
                                     rng);
        }
    };
    const auto raws_rand = executed_raws(run(0));
    const auto raws_dist = executed_raws(run(1));
    const auto raws_qgram = executed_raws(run(2));
    CHECK(raws_rand == raws_dist);
    CHECK(raws_rand == raws_qgram);
}

TEST_CASE("counter exactness across rho and W") {
    NeverFails exec;
    for (const std::uint64_t rho : {2, 5, 10, 50}) {
        for (const std::size_t w : {std::size_t{1}, std::size_t{10}, std::size_t{30}}) {
            {
                sim::StringGenerator gen(8);
                Rng rng(3);
                const auto rec = run_art_dist(
                    gen, exec, StoppingCriterion::after_executions(rho), w, rng, 0,
                    TokenizeMode::characters);
                CHECK(rec.counters.executions == rho);
                CHECK(rec.counters.distance_calls == expected_distance_calls(w, rho));
                CHECK(rec.counters.diversity_evals == 0);
            }
            {
                sim::StringGenerator gen(8);
                Rng rng(3);
                const auto rec = run_art_qgram(
                    gen, exec, StoppingCriterion::after_executions(rho), w, 2,
                    TokenizeMode::characters, DiversityMetric::entropy, rng);
                CHECK(rec.counters.executions == rho);
                CHECK(rec.counters.diversity_evals == expected_diversity_evals(w, rho));
                CHECK(rec.counters.distance_calls == 0);
            }
        }
    }
}

TEST_CASE("archive aggregate equals recomputation from the executed list") {
    sim::StringGenerator gen(20);
    NeverFails exec;
    Rng rng(17);
    const auto rec = run_art_qgram(gen, exec, StoppingCriterion::after_executions(60), 5, 2,
                                   TokenizeMode::characters, DiversityMetric::entropy, rng);
    QGramCounts recomputed;
    for (const auto& t : rec.executed) {
        recomputed.merge_in(count_qgrams(tokenize(t, TokenizeMode::characters), 2));
    }
    CHECK(recomputed.total() == rec.aggregate.total());
    CHECK(recomputed.distinct() == rec.aggregate.distinct());
    for (const auto& [g, n] : recomputed.entries()) {
        CHECK(rec.aggregate.count(g) == n);
    }
}

TEST_CASE("argmax replay reproduces every logged selection") {
    sim::StringGenerator inner(12);
    RecordingGenerator gen(inner);
    NeverFails exec;
    Rng rng(23);
    const auto rec = run_art_qgram(gen, exec, StoppingCriterion::after_executions(25), 6, 2,
                                   TokenizeMode::characters, DiversityMetric::entropy, rng);

    QGramCounts aggregate;
    const auto& batches = gen.batches();
    REQUIRE(batches.size() == rec.iterations.size());
    for (std::size_t it = 0; it < batches.size(); ++it) {
        const auto& batch = batches[it];
        std::size_t expect_chosen = 0;
        if (it == 0) {
            REQUIRE(batch.size() == 1);
        } else {
            std::vector<double> scores;
            for (const auto& cand : batch) {
                scores.push_back(score_candidate(aggregate, cand, 2,
                                                 TokenizeMode::characters,
                                                 DiversityMetric::entropy));
            }
            expect_chosen = select_argmax(scores);
            CHECK(scores[expect_chosen] == doctest::Approx(rec.iterations[it].score));
        }
        CHECK(rec.iterations[it].chosen_index == expect_chosen);
        aggregate.merge_in(count_qgrams(
            tokenize(batch[expect_chosen], TokenizeMode::characters), 2));
    }
}

TEST_CASE("select_argmax: maximum wins, ties break to the first index") {
    CHECK(select_argmax(std::vector<double>{1.0, 2.0}) == 1);
    CHECK(select_argmax(std::vector<double>{2.0, 2.0}) == 0);
    CHECK(select_argmax(std::vector<double>{3.0, 3.0, 3.0}) == 0);
    CHECK(select_argmax(std::vector<double>{0.5}) == 0);
    CHECK_THROWS_AS(select_argmax(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("breakeven_factor: paper operating points and domain") {
    CHECK(breakeven_factor(1.51e-5, 10, BreakevenAlgo::dist) ==
          doctest::Approx(1.655e5).epsilon(0.005));
    CHECK(breakeven_factor(1.51e-5, 10, BreakevenAlgo::qgram) ==
          doctest::Approx(10.0).epsilon(0.02));
    CHECK(breakeven_factor(0.25, 10, BreakevenAlgo::dist) == doctest::Approx(5.0));
    CHECK_THROWS_AS(breakeven_factor(0.0, 10, BreakevenAlgo::dist), std::domain_error);
    CHECK_THROWS_AS(breakeven_factor(0.5, 10, BreakevenAlgo::qgram), std::domain_error);
    CHECK_THROWS_AS(breakeven_factor(-0.1, 10, BreakevenAlgo::dist), std::domain_error);
}

TEST_CASE("first_failure: stops at the failure, cap censors") {
    {
        ScriptedGenerator gen({{TestCase::from_string("aa")},
                               {TestCase::from_string("bb")},
                               {TestCase::from_string("boom")}});
        FailsOn exec({"boom"});
        Rng rng(1);
        const auto rec = run_random(gen, exec, StoppingCriterion::on_first_failure(), rng);
        CHECK(rec.saw_failure);
        CHECK(rec.counters.executions == 3);
        CHECK(rec.executions_to_first_failure == 3);
    }
    {
        sim::StringGenerator gen(5);
        NeverFails exec;
        Rng rng(1);
        const auto rec =
            run_random(gen, exec, StoppingCriterion::on_first_failure(20), rng);
        CHECK(!rec.saw_failure);
        CHECK(rec.counters.executions == 20);  // censored at the cap
        CHECK(rec.executions_to_first_failure == 0);
    }
}

TEST_CASE("all_targets_covered: stops once the universe is exhausted") {
    sim::StringGenerator gen(6, "abc");
    TinyCoverage exec;
    Rng rng(2);
    const auto rec = run_random(gen, exec, StoppingCriterion::until_all_covered(), rng);
    CHECK(rec.covered.size() == 3);
    CHECK(rec.counters.executions >= 3);

    NeverFails no_universe;
    Rng rng2(2);
    sim::StringGenerator gen2(6, "abc");
    CHECK_THROWS_AS(
        run_random(gen2, no_universe, StoppingCriterion::until_all_covered(), rng2),
        std::invalid_argument);
}

TEST_CASE("executor faults abort the run record") {
    sim::StringGenerator gen(5);
    Throws exec;
    Rng rng(4);
    const auto rec = run_random(gen, exec, StoppingCriterion::after_executions(10), rng);
    CHECK(rec.aborted);
    CHECK(rec.abort_reason == "sut crashed");
    CHECK(rec.counters.executions == 0);

    Rng rng2(4);
    sim::StringGenerator gen2(5);
    Throws exec2;
    const auto rec2 = run_art_qgram(gen2, exec2, StoppingCriterion::after_executions(10), 3,
                                    2, TokenizeMode::characters, DiversityMetric::entropy,
                                    rng2);
    CHECK(rec2.aborted);
}

TEST_CASE("run record serializes to JSON") {
    sim::StringGenerator gen(6);
    NeverFails exec;
    Rng rng(5);
    const auto rec = run_art_qgram(gen, exec, StoppingCriterion::after_executions(4), 3, 2,
                                   TokenizeMode::characters, DiversityMetric::entropy, rng,
                                   5);
    const auto j = rec.to_json();
    CHECK(j.at("seed") == 5);
    CHECK(j.at("config").at("strategy") == "qgram");
    CHECK(j.at("config").at("mode") == "characters");
    CHECK(j.at("iterations").size() == 4);
    CHECK(j.at("counters").at("executions") == 4);
    CHECK(j.at("iterations").at(0).at("score").is_null());  // seed test is unscored
    CHECK(j.at("iterations").at(1).at("score").is_number());
}
