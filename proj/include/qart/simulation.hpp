#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "qart/selectors.hpp"

namespace qart::sim {

// Uniform random strings: length uniform in [1, max_len] ([0, max_len] when
// allow_empty), characters uniform over the alphabet.
class StringGenerator final : public CandidateGenerator {
public:
    StringGenerator(std::size_t max_len, std::string alphabet = default_alphabet(),
                    bool allow_empty = false);

    std::vector<TestCase> sample(std::size_t count, Rng& rng) override;

    std::size_t max_len() const noexcept { return max_len_; }
    const std::string& alphabet() const noexcept { return alphabet_; }

    static std::string default_alphabet();

private:
    std::size_t max_len_;
    std::string alphabet_;
    bool allow_empty_;
};

// Pure predicate deciding which inputs the simulated mutant misclassifies,
// plus the failure probability it induces under the string generator.
class FailureModel {
public:
    virtual ~FailureModel() = default;
    virtual bool fails(std::string_view input) const = 0;
    virtual double nominal_theta() const = 0;
    virtual std::string name() const = 0;
};

// Boundary bug: single-character strings are misclassified. Under uniform
// length in [1, L] the failure probability is exactly 1/L.
std::unique_ptr<FailureModel> make_length_one_model(std::size_t max_len);

// Contiguous failure region keyed to a string prefix: an input fails iff it
// starts with `prefix` and its length is at most `max_fail_len`.
std::unique_ptr<FailureModel> make_qgram_region_model(std::string prefix,
                                                      std::size_t max_fail_len,
                                                      std::size_t max_len,
                                                      std::size_t alphabet_size);

// Parses "length1" or "qgram-region:<prefix>:<maxlen>".
std::unique_ptr<FailureModel> parse_failure_model(const std::string& spec,
                                                  std::size_t max_len,
                                                  std::size_t alphabet_size);

// True iff the input equals its reverse; sleeps `delay` first.
bool palindrome_sut(std::string_view input, std::chrono::nanoseconds delay);

enum class Strategy { rand, dist, qgram };

const char* to_string(Strategy s) noexcept;
Strategy strategy_from_string(const std::string& s);

struct SimConfig {
    Strategy strategy = Strategy::rand;
    std::size_t max_len = 100;                         // L
    std::string alphabet = StringGenerator::default_alphabet();
    std::size_t w_size = 10;
    std::size_t q = 2;
    DiversityMetric diversity = DiversityMetric::entropy;
    TokenizeOptions tokenize{};
    std::chrono::nanoseconds delay{0};
    std::string failure_model = "length1";
    std::uint64_t fmeasure_cap = 10'000'000;
    std::size_t p_tests = 50;  // execution budget of one P-measure repetition
};

enum class MeasureKind { P, F, T };

const char* to_string(MeasureKind k) noexcept;
MeasureKind measure_from_string(const std::string& s);

struct MeasureRecord {
    MeasureKind kind = MeasureKind::P;
    double value = 0.0;         // probability | executions | seconds
    std::size_t repetitions = 0;
    double rse = 0.0;
    bool rse_met = false;       // false when max_reps stopped the loop first
    std::size_t censored = 0;   // repetitions that hit the execution cap
    double theta_nominal = 0.0;
    std::uint64_t executions = 0;      // totals across repetitions
    std::uint64_t distance_calls = 0;
    std::uint64_t diversity_evals = 0;
};

// One repetition of a measure experiment, reduced to a scalar sample.
struct RepOutcome {
    double value = 0.0;
    bool censored = false;
    InstrumentationCounters counters;
};

RepOutcome run_P_repetition(const SimConfig& cfg, std::uint64_t seed);
RepOutcome run_F_repetition(const SimConfig& cfg, std::uint64_t seed);
RepOutcome run_T_repetition(const SimConfig& cfg, std::uint64_t seed);

// Per-repetition outcomes, in repetition order (seeds seed0 + index); the raw
// samples behind the measures, for statistical comparisons across strategies.
std::vector<RepOutcome> collect_repetitions(const SimConfig& cfg, MeasureKind kind,
                                            std::size_t reps, std::uint64_t seed0,
                                            bool parallel);

// Fixed-repetition measures; seeds are seed0 + repetition index.
MeasureRecord measure_P(const SimConfig& cfg, std::size_t reps, std::uint64_t seed0,
                        bool parallel = true);
MeasureRecord measure_F(const SimConfig& cfg, std::size_t reps, std::uint64_t seed0,
                        bool parallel = true);
MeasureRecord measure_T(const SimConfig& cfg, std::size_t reps, std::uint64_t seed0,
                        bool parallel = false);

struct RseOptions {
    double threshold = 0.05;
    std::size_t batch = 50;
    std::size_t max_reps = 100'000;
    bool parallel = true;  // T-measure callers should pin this to false
};

// Adaptive repetition: grow the sample in batches until the relative standard
// error of the mean falls below the threshold or max_reps is reached.
MeasureRecord run_until_rse(const std::function<RepOutcome(std::uint64_t seed)>& one_rep,
                            MeasureKind kind, const RseOptions& opts, std::uint64_t seed0);

// Convenience driver: the measure for cfg.strategy under adaptive repetition.
MeasureRecord measure_until_rse(const SimConfig& cfg, MeasureKind kind,
                                const RseOptions& opts, std::uint64_t seed0);

}  // namespace qart::sim
