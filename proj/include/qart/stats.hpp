#pragma once

#include <span>
#include <string>

namespace qart::stats {

struct RankSumResult {
    double p_value = 1.0;   // two-sided
    double statistic = 0.0; // Mann-Whitney U of the first sample
    bool exact = false;     // exact null distribution vs normal approximation
};

// Two-sided Wilcoxon rank-sum / Mann-Whitney test. Uses the exact null
// distribution when min(|x|,|y|) <= 8 and there are no ties, the normal
// approximation with tie correction and continuity correction otherwise.
// Throws std::invalid_argument on empty samples.
RankSumResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y);

// The two routes individually, for cross-validation.
double wilcoxon_exact_p(std::span<const double> x, std::span<const double> y);
double wilcoxon_normal_p(std::span<const double> x, std::span<const double> y);

enum class Magnitude { negligible, small_effect, medium, large };

struct EffectSize {
    double a12 = 0.5;
    Magnitude magnitude = Magnitude::negligible;
};

// Vargha-Delaney A12: probability that a draw from x exceeds a draw from y,
// ties counted half. Magnitude thresholds on |a12 - 0.5|: 0.06 / 0.14 / 0.21.
EffectSize vargha_delaney(std::span<const double> x, std::span<const double> y);

const char* to_string(Magnitude m) noexcept;

// (sd / sqrt(n)) / |mean| with the n-1 standard deviation. Throws
// std::invalid_argument if n < 2 or the mean is zero.
double relative_standard_error(std::span<const double> sample);

double mean(std::span<const double> sample);
double sample_stddev(std::span<const double> sample);

}  // namespace qart::stats
