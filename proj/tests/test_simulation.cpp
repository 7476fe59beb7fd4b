#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>

#include "qart/simulation.hpp"
#include "qart/stats.hpp"

using namespace qart;
using namespace qart::sim;
using namespace std::chrono_literals;

TEST_CASE("palindrome_sut") {
    CHECK(palindrome_sut("abba", 0ns));
    CHECK(palindrome_sut("aba", 0ns));
    CHECK(!palindrome_sut("abc", 0ns));
    CHECK(palindrome_sut("", 0ns));
    CHECK(palindrome_sut("x", 0ns));

    const auto t0 = Clock::now();
    palindrome_sut("abc", 20ms);
    CHECK(Clock::now() - t0 >= 20ms);
}

TEST_CASE("string generator: lengths in range, deterministic, alphabet respected") {
    StringGenerator gen(10, "ab");
    Rng rng(1);
    const auto batch = gen.sample(500, rng);
    REQUIRE(batch.size() == 500);
    for (const auto& t : batch) {
        REQUIRE(t.raw.has_value());
        CHECK(t.raw->size() >= 1);
        CHECK(t.raw->size() <= 10);
        for (char c : *t.raw) CHECK((c == 'a' || c == 'b'));
    }
    Rng rng2(1);
    StringGenerator gen2(10, "ab");
    const auto batch2 = gen2.sample(500, rng2);
    for (std::size_t i = 0; i < batch.size(); ++i) CHECK(*batch[i].raw == *batch2[i].raw);

    CHECK_THROWS_AS(StringGenerator(0), std::invalid_argument);
    CHECK_THROWS_AS(StringGenerator(5, ""), std::invalid_argument);
}

TEST_CASE("length-one failure model: construction and calibration") {
    const auto model = make_length_one_model(100);
    CHECK(model->fails("x"));
    CHECK(!model->fails("xy"));
    CHECK(!model->fails(""));
    CHECK(model->nominal_theta() == doctest::Approx(0.01));

    // Monte Carlo calibration against the generator (contract: within 10%
    // relative error at 1e7 samples).
    StringGenerator gen(100);
    Rng rng(12345);
    std::uint64_t failures = 0;
    const std::size_t n = 10'000'000;
    const std::size_t batch = 100'000;
    for (std::size_t done = 0; done < n; done += batch) {
        const auto tests = gen.sample(batch, rng);
        for (const auto& t : tests) failures += model->fails(*t.raw) ? 1 : 0;
    }
    const double theta_hat = static_cast<double>(failures) / static_cast<double>(n);
    CHECK(std::abs(theta_hat - 0.01) / 0.01 < 0.1);

    CHECK_THROWS_AS(make_length_one_model(1), std::invalid_argument);
}

TEST_CASE("qgram-region failure model: predicate and nominal theta") {
    const auto model = make_qgram_region_model("ab", 10, 100, 26);
    CHECK(model->fails("ab"));
    CHECK(model->fails("abxxxxxx"));        // len 8 <= 10
    CHECK(!model->fails("abxxxxxxxxxxx"));  // len 13 > 10
    CHECK(!model->fails("ba"));
    CHECK(!model->fails("a"));
    CHECK(model->nominal_theta() == doctest::Approx(9.0 / 100.0 / 676.0).epsilon(1e-12));

    // Monte Carlo cross-check on a coarser model
    const auto coarse = make_qgram_region_model("a", 20, 50, 2);
    StringGenerator gen(50, "ab");
    Rng rng(777);
    std::uint64_t failures = 0;
    const std::size_t n = 1'000'000;
    const auto tests = gen.sample(n, rng);
    for (const auto& t : tests) failures += coarse->fails(*t.raw) ? 1 : 0;
    const double theta_hat = static_cast<double>(failures) / static_cast<double>(n);
    CHECK(theta_hat == doctest::Approx(coarse->nominal_theta()).epsilon(0.05));

    CHECK_THROWS_AS(make_qgram_region_model("", 5, 100, 26), std::invalid_argument);
}

TEST_CASE("parse_failure_model") {
    CHECK(parse_failure_model("length1", 50, 26)->name() == "length1");
    CHECK(parse_failure_model("qgram-region:zq:40", 1000, 26)->name() == "qgram-region:zq:40");
    CHECK(parse_failure_model("always", 10, 26)->nominal_theta() == 1.0);
    CHECK(parse_failure_model("never", 10, 26)->nominal_theta() == 0.0);
    CHECK_THROWS_AS(parse_failure_model("bogus", 10, 26), std::invalid_argument);
    CHECK_THROWS_AS(parse_failure_model("qgram-region:zq", 10, 26), std::invalid_argument);
}

TEST_CASE("measure_P: degenerate models and the binomial closed form") {
    SimConfig cfg;
    cfg.max_len = 100;

    cfg.failure_model = "never";
    const auto p0 = measure_P(cfg, 40, 1);
    CHECK(p0.value == 0.0);
    CHECK(p0.repetitions == 40);

    cfg.failure_model = "always";
    const auto p1 = measure_P(cfg, 40, 1);
    CHECK(p1.value == 1.0);
    CHECK(p1.censored == 0);

    // Rand, theta = 1/100, 50 tests: P ~ 1 - 0.99^50 ~ 0.395, 3-sigma binomial CI
    cfg.failure_model = "length1";
    const std::size_t reps = 600;
    const auto p = measure_P(cfg, reps, 7);
    const double expect = 1.0 - std::pow(1.0 - 0.01, 50);
    const double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(reps));
    CHECK(std::abs(p.value - expect) <= 3.0 * sigma);
    CHECK(p.theta_nominal == doctest::Approx(0.01));
}

TEST_CASE("measure_F: degenerate and geometric behaviour, censoring") {
    SimConfig cfg;
    cfg.max_len = 50;

    cfg.failure_model = "always";
    const auto f1 = measure_F(cfg, 20, 3);
    CHECK(f1.value == 1.0);
    CHECK(f1.censored == 0);

    cfg.failure_model = "length1";
    const std::size_t reps = 500;
    const auto f = measure_F(cfg, reps, 11);
    // geometric: mean L = 50, sd just under 50
    const double sigma = 49.5 / std::sqrt(static_cast<double>(reps));
    CHECK(std::abs(f.value - 50.0) <= 3.0 * sigma);
    CHECK(f.executions == static_cast<std::uint64_t>(std::llround(f.value * reps)));

    cfg.failure_model = "never";
    cfg.fmeasure_cap = 25;
    const auto capped = measure_F(cfg, 10, 5);
    CHECK(capped.censored == 10);
    CHECK(capped.value == 25.0);
}

TEST_CASE("measure_T: lower bound and consistency with executions x delay") {
    SimConfig cfg;
    cfg.max_len = 20;
    cfg.failure_model = "length1";  // theta = 1/20
    cfg.delay = 5ms;
    const std::size_t reps = 10;
    const auto t = measure_T(cfg, reps, 21, /*parallel=*/false);
    CHECK(t.censored == 0);
    const double delay_s = 0.005;
    const double mean_execs = static_cast<double>(t.executions) / reps;
    const double floor = mean_execs * delay_s;
    CHECK(t.value >= floor);                // delay injection is a hard lower bound
    CHECK(t.value <= floor * 1.25 + 0.01);  // and dominates the run time here

    cfg.failure_model = "always";
    cfg.delay = 0ms;
    const auto fast = measure_T(cfg, 5, 2, false);
    CHECK(fast.value < 0.05);  // one execution; sub-millisecond with slack
}

TEST_CASE("run_until_rse: constant, Bernoulli and capped behaviours") {
    // constant measure: stops after the first batch with rse 0
    const auto constant = run_until_rse(
        [](std::uint64_t) { return RepOutcome{.value = 3.0}; }, MeasureKind::F,
        {.threshold = 0.05, .batch = 30, .max_reps = 1000}, 1);
    CHECK(constant.repetitions == 30);
    CHECK(constant.rse == 0.0);
    CHECK(constant.rse_met);
    CHECK(constant.value == 3.0);

    // Bernoulli(0.5): rse ~ sqrt((1-p)/(p n)); threshold 0.05 needs ~400 reps
    auto coin = [](std::uint64_t seed) {
        std::uint64_t x = seed + 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return RepOutcome{.value = static_cast<double>((x ^ (x >> 31)) & 1)};
    };
    const auto bern = run_until_rse(coin, MeasureKind::P,
                                    {.threshold = 0.05, .batch = 50, .max_reps = 100'000}, 9);
    CHECK(bern.rse_met);
    CHECK(bern.rse < 0.05);
    CHECK(bern.repetitions >= 300);
    CHECK(bern.repetitions <= 2000);
    CHECK(bern.value == doctest::Approx(0.5).epsilon(0.15));

    // high variance with a tiny cap: flagged, not met
    auto spiky = [](std::uint64_t seed) {
        return RepOutcome{.value = seed % 2 == 0 ? 1000.0 : 1.0};
    };
    const auto capped = run_until_rse(spiky, MeasureKind::F,
                                      {.threshold = 0.05, .batch = 5, .max_reps = 10}, 1);
    CHECK(capped.repetitions == 10);
    CHECK(!capped.rse_met);

    CHECK_THROWS_AS(run_until_rse([](std::uint64_t) { return RepOutcome{}; }, MeasureKind::F,
                                  {.threshold = 0.0, .batch = 5, .max_reps = 10}, 1),
                    std::invalid_argument);
}

TEST_CASE("measure_until_rse: wiring and strategy counters") {
    SimConfig cfg;
    cfg.max_len = 30;
    cfg.failure_model = "length1";
    cfg.w_size = 4;

    cfg.strategy = Strategy::rand;
    const auto rand_rec =
        measure_until_rse(cfg, MeasureKind::F, {.batch = 40, .max_reps = 400}, 3);
    CHECK(rand_rec.repetitions >= 40);
    CHECK(rand_rec.distance_calls == 0);
    CHECK(rand_rec.diversity_evals == 0);
    CHECK(rand_rec.theta_nominal == doctest::Approx(1.0 / 30.0));

    // Diversity selectors shun the single-character failure region of the
    // length1 model, so cap their F runs; censored runs still exercise the
    // counter wiring.
    cfg.fmeasure_cap = 200;
    cfg.strategy = Strategy::dist;
    const auto dist_rec = measure_F(cfg, 5, 3);
    CHECK(dist_rec.distance_calls > 0);
    CHECK(dist_rec.diversity_evals == 0);

    cfg.strategy = Strategy::qgram;
    const auto qgram_rec = measure_F(cfg, 5, 3);
    CHECK(qgram_rec.diversity_evals > 0);
    CHECK(qgram_rec.distance_calls == 0);
}

TEST_CASE("strategy and measure round trips") {
    CHECK(strategy_from_string("rand") == Strategy::rand);
    CHECK(strategy_from_string("dist") == Strategy::dist);
    CHECK(strategy_from_string("qgram") == Strategy::qgram);
    CHECK_THROWS_AS(strategy_from_string("x"), std::invalid_argument);
    CHECK(measure_from_string("P") == MeasureKind::P);
    CHECK(measure_from_string("F") == MeasureKind::F);
    CHECK(measure_from_string("T") == MeasureKind::T);
    CHECK_THROWS_AS(measure_from_string("x"), std::invalid_argument);
}
