#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qart/stats.hpp"

using namespace qart::stats;

namespace {

// Exhaustive rank-assignment oracle: enumerate every way the pooled sorted
// sample could split between x and y, count splits at least as extreme.
double brute_force_exact_p(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size(), m = y.size();
    std::vector<double> pool(x.begin(), x.end());
    pool.insert(pool.end(), y.begin(), y.end());
    std::sort(pool.begin(), pool.end());

    auto u_of = [](const std::vector<double>& a, const std::vector<double>& b) {
        double u = 0;
        for (double ai : a)
            for (double bj : b) u += ai > bj ? 1.0 : (ai == bj ? 0.5 : 0.0);
        return u;
    };
    const double u_obs = u_of(x, y);
    const double lo = std::min(u_obs, double(n * m) - u_obs);

    std::vector<bool> mask(n + m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(n), true);
    std::sort(mask.begin(), mask.end());
    double extreme = 0.0, total = 0.0;
    do {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            (mask[i] ? xs : ys).push_back(pool[i]);
        }
        const double u = u_of(xs, ys);
        total += 1.0;
        if (u <= lo) extreme += 1.0;
    } while (std::next_permutation(mask.begin(), mask.end()));
    return std::min(1.0, 2.0 * extreme / total);
}

std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n, double mu, double sd) {
    std::normal_distribution<double> d(mu, sd);
    std::vector<double> out(n);
    for (auto& v : out) v = d(rng);
    return out;
}

}  // namespace

TEST_CASE("wilcoxon: fully separated small samples") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> y{4, 5, 6};
    const auto r = wilcoxon_rank_sum(x, y);
    CHECK(r.exact);
    CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r.statistic == 0.0);
    // direction does not change the two-sided p
    CHECK(wilcoxon_rank_sum(y, x).p_value == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("wilcoxon: identical samples give p = 1") {
    const std::vector<double> x{1, 2, 3};
    const auto r = wilcoxon_rank_sum(x, x);
    CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("wilcoxon: errors on empty samples") {
    const std::vector<double> x{1.0};
    const std::vector<double> empty;
    CHECK_THROWS_AS(wilcoxon_rank_sum(x, empty), std::invalid_argument);
    CHECK_THROWS_AS(wilcoxon_rank_sum(empty, x), std::invalid_argument);
}

TEST_CASE("wilcoxon: exact p matches the exhaustive oracle") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<double> x(4), y(5);
        for (auto& v : x) v = d(rng);
        for (auto& v : y) v = d(rng);
        const double expected = brute_force_exact_p(x, y);
        CHECK(wilcoxon_exact_p(x, y) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("wilcoxon: exact and normal approximation agree on 8x8") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> x(8), y(8);
        for (auto& v : x) v = d(rng);
        for (auto& v : y) v = d(rng);
        const double pe = wilcoxon_exact_p(x, y);
        const double pn = wilcoxon_normal_p(x, y);
        CHECK(std::abs(pe - pn) < 0.02);
    }
}

TEST_CASE("wilcoxon: large separated gaussians are significant") {
    std::mt19937_64 rng(41);
    const auto x = gaussian(rng, 50, 0.0, 1.0);
    const auto y = gaussian(rng, 50, 5.0, 1.0);
    const auto r = wilcoxon_rank_sum(x, y);
    CHECK(!r.exact);
    CHECK(r.p_value < 1e-6);
}

TEST_CASE("wilcoxon: invariant under strictly monotone transforms") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> d(0.1, 4.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(6), y(7);
        for (auto& v : x) v = d(rng);
        for (auto& v : y) v = d(rng);
        auto transform = [](std::vector<double> v) {
            for (auto& t : v) t = std::exp(3.0 * t + 1.0);
            return v;
        };
        const double p1 = wilcoxon_rank_sum(x, y).p_value;
        const double p2 = wilcoxon_rank_sum(transform(x), transform(y)).p_value;
        CHECK(p1 == doctest::Approx(p2).epsilon(1e-12));
    }
}

TEST_CASE("vargha_delaney: examples") {
    const std::vector<double> x{1, 2};
    const std::vector<double> y{1, 3};
    CHECK(vargha_delaney(x, y).a12 == doctest::Approx(0.375).epsilon(1e-12));

    const std::vector<double> same{2, 2, 2};
    const auto e = vargha_delaney(same, same);
    CHECK(e.a12 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.magnitude == Magnitude::negligible);

    const std::vector<double> hi{10, 11, 12};
    const std::vector<double> lo{1, 2, 3};
    const auto big = vargha_delaney(hi, lo);
    CHECK(big.a12 == doctest::Approx(1.0));
    CHECK(big.magnitude == Magnitude::large);

    const std::vector<double> empty;
    CHECK_THROWS_AS(vargha_delaney(empty, lo), std::invalid_argument);
}

TEST_CASE("vargha_delaney: antisymmetry on random pairs") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> d(0.0, 10.0);
    std::uniform_int_distribution<std::size_t> len(1, 12);
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> x(len(rng)), y(len(rng));
        for (auto& v : x) v = std::round(d(rng));  // rounded to force some ties
        for (auto& v : y) v = std::round(d(rng));
        const double axy = vargha_delaney(x, y).a12;
        const double ayx = vargha_delaney(y, x).a12;
        CHECK(axy + ayx == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("relative_standard_error: examples and errors") {
    const std::vector<double> s{1, 1, 1, 3};
    CHECK(relative_standard_error(s) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const std::vector<double> constant{4, 4, 4, 4};
    CHECK(relative_standard_error(constant) == 0.0);

    CHECK_THROWS_AS(relative_standard_error(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(relative_standard_error(std::vector<double>{-1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("relative_standard_error: halves when n quadruples") {
    std::mt19937_64 rng(53);
    const auto base = gaussian(rng, 400, 10.0, 2.0);
    const auto big = gaussian(rng, 1600, 10.0, 2.0);
    const double r1 = relative_standard_error(base);
    const double r4 = relative_standard_error(big);
    CHECK(r4 == doctest::Approx(r1 / 2.0).epsilon(0.35));
}
