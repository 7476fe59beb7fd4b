#include "qart/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qart::stats {

namespace {

void require_non_empty(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) {
        throw std::invalid_argument("wilcoxon/vargha_delaney: empty sample");
    }
}

bool has_ties(std::span<const double> x, std::span<const double> y) {
    std::vector<double> all(x.begin(), x.end());
    all.insert(all.end(), y.begin(), y.end());
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) != all.end();
}

// Mann-Whitney U of x against y, ties counted half.
double u_statistic(std::span<const double> x, std::span<const double> y) {
    double u = 0.0;
    for (double xi : x) {
        for (double yj : y) {
            if (xi > yj) u += 1.0;
            else if (xi == yj) u += 0.5;
        }
    }
    return u;
}

// Number of rank subsets of size n (out of n+m) with U statistic equal to u,
// via the recurrence N(u; n, m) = N(u-m; n-1, m) + N(u; n, m-1) on whether
// the largest pooled observation belongs to x or to y. The null distribution
// is symmetric in the two samples, so the smaller one is kept as the inner
// dimension.
std::vector<double> exact_u_distribution(std::size_t n, std::size_t m) {
    if (m > n) std::swap(n, m);
    const std::size_t umax = n * m;
    // f[j][u] = N(u; i, j) for the current outer index i.
    std::vector<std::vector<double>> f(m + 1, std::vector<double>(umax + 1, 0.0));
    for (std::size_t j = 0; j <= m; ++j) f[j][0] = 1.0;  // i = 0: U is always 0
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::vector<double>> g(m + 1, std::vector<double>(umax + 1, 0.0));
        g[0][0] = 1.0;  // j = 0: U is always 0
        for (std::size_t j = 1; j <= m; ++j) {
            for (std::size_t u = 0; u <= umax; ++u) {
                const double from_x = (u >= j) ? f[j][u - j] : 0.0;
                const double from_y = g[j - 1][u];
                g[j][u] = from_x + from_y;
            }
        }
        f = std::move(g);
    }
    return f[m];
}

double normal_sf(double z) {
    // 1 - Phi(z) via erfc.
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

double wilcoxon_exact_p(std::span<const double> x, std::span<const double> y) {
    require_non_empty(x, y);
    const std::size_t n = x.size(), m = y.size();
    const double u = u_statistic(x, y);
    // The exact distribution assumes no ties, so u is integral here.
    const auto dist = exact_u_distribution(n, m);
    const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
    const auto u_lo = static_cast<std::size_t>(std::llround(std::min(u, double(n * m) - u)));
    double tail = 0.0;
    for (std::size_t k = 0; k <= u_lo && k < dist.size(); ++k) tail += dist[k];
    return std::min(1.0, 2.0 * tail / total);
}

double wilcoxon_normal_p(std::span<const double> x, std::span<const double> y) {
    require_non_empty(x, y);
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    const double u = u_statistic(x, y);
    const double mu = n * m / 2.0;

    // Tie correction over the pooled sample.
    std::vector<double> all(x.begin(), x.end());
    all.insert(all.end(), y.begin(), y.end());
    std::sort(all.begin(), all.end());
    const double big_n = n + m;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double var =
        n * m / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (var <= 0.0) return 1.0;  // all observations identical
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    return std::min(1.0, 2.0 * normal_sf(z));
}

RankSumResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y) {
    require_non_empty(x, y);
    RankSumResult r;
    r.statistic = u_statistic(x, y);
    r.exact = std::min(x.size(), y.size()) <= 8 && !has_ties(x, y);
    r.p_value = r.exact ? wilcoxon_exact_p(x, y) : wilcoxon_normal_p(x, y);
    return r;
}

EffectSize vargha_delaney(std::span<const double> x, std::span<const double> y) {
    require_non_empty(x, y);
    EffectSize e;
    e.a12 = u_statistic(x, y) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
    const double d = std::abs(e.a12 - 0.5);
    if (d < 0.06) e.magnitude = Magnitude::negligible;
    else if (d < 0.14) e.magnitude = Magnitude::small_effect;
    else if (d < 0.21) e.magnitude = Magnitude::medium;
    else e.magnitude = Magnitude::large;
    return e;
}

const char* to_string(Magnitude m) noexcept {
    switch (m) {
        case Magnitude::negligible: return "negligible";
        case Magnitude::small_effect: return "small";
        case Magnitude::medium: return "medium";
        case Magnitude::large: return "large";
    }
    return "?";
}

double mean(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double v : sample) s += v;
    return s / static_cast<double>(sample.size());
}

double sample_stddev(std::span<const double> sample) {
    if (sample.size() < 2) throw std::invalid_argument("sample_stddev: need n >= 2");
    const double mu = mean(sample);
    double ss = 0.0;
    for (double v : sample) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / static_cast<double>(sample.size() - 1));
}

double relative_standard_error(std::span<const double> sample) {
    if (sample.size() < 2) {
        throw std::invalid_argument("relative_standard_error: need n >= 2");
    }
    const double mu = mean(sample);
    if (mu == 0.0) {
        throw std::invalid_argument("relative_standard_error: zero mean");
    }
    const double se = sample_stddev(sample) / std::sqrt(static_cast<double>(sample.size()));
    return se / std::abs(mu);
}

}  // namespace qart::stats
