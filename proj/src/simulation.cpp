#include "qart/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "parallel_util.hpp"
#include "qart/stats.hpp"

namespace qart::sim {

StringGenerator::StringGenerator(std::size_t max_len, std::string alphabet,
                                 bool allow_empty)
    : max_len_(max_len), alphabet_(std::move(alphabet)), allow_empty_(allow_empty) {
    if (max_len_ == 0) throw std::invalid_argument("StringGenerator: max_len must be >= 1");
    if (alphabet_.empty()) throw std::invalid_argument("StringGenerator: empty alphabet");
}

std::string StringGenerator::default_alphabet() {
    return "abcdefghijklmnopqrstuvwxyz";
}

std::vector<TestCase> StringGenerator::sample(std::size_t count, Rng& rng) {
    std::uniform_int_distribution<std::size_t> len_dist(allow_empty_ ? 0 : 1, max_len_);
    std::uniform_int_distribution<std::size_t> chr_dist(0, alphabet_.size() - 1);
    std::vector<TestCase> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t len = len_dist(rng);
        std::string s;
        s.reserve(len);
        for (std::size_t j = 0; j < len; ++j) s += alphabet_[chr_dist(rng)];
        out.push_back(TestCase::from_string(std::move(s)));
    }
    return out;
}

namespace {

class LengthOneModel final : public FailureModel {
public:
    explicit LengthOneModel(std::size_t max_len) : max_len_(max_len) {
        if (max_len_ < 2) throw std::invalid_argument("length1 model: max_len must be >= 2");
    }
    bool fails(std::string_view input) const override { return input.size() == 1; }
    double nominal_theta() const override { return 1.0 / static_cast<double>(max_len_); }
    std::string name() const override { return "length1"; }

private:
    std::size_t max_len_;
};

// Degenerate models for harness calibration: every input fails / none does.
class ConstantModel final : public FailureModel {
public:
    explicit ConstantModel(bool fails) : fails_(fails) {}
    bool fails(std::string_view) const override { return fails_; }
    double nominal_theta() const override { return fails_ ? 1.0 : 0.0; }
    std::string name() const override { return fails_ ? "always" : "never"; }

private:
    bool fails_;
};

class QGramRegionModel final : public FailureModel {
public:
    QGramRegionModel(std::string prefix, std::size_t max_fail_len, std::size_t max_len,
                     std::size_t alphabet_size)
        : prefix_(std::move(prefix)),
          max_fail_len_(max_fail_len),
          max_len_(max_len),
          alphabet_size_(alphabet_size) {
        if (prefix_.empty()) throw std::invalid_argument("qgram-region: empty prefix");
        if (alphabet_size_ == 0) throw std::invalid_argument("qgram-region: empty alphabet");
    }

    bool fails(std::string_view input) const override {
        return input.size() <= max_fail_len_ && input.starts_with(prefix_);
    }

    double nominal_theta() const override {
        // Uniform length in [1, L], characters i.i.d. uniform over the alphabet.
        const std::size_t hi = std::min(max_fail_len_, max_len_);
        if (hi < prefix_.size()) return 0.0;
        const double lengths = static_cast<double>(hi - prefix_.size() + 1);
        return lengths / static_cast<double>(max_len_) *
               std::pow(1.0 / static_cast<double>(alphabet_size_),
                        static_cast<double>(prefix_.size()));
    }

    std::string name() const override {
        return "qgram-region:" + prefix_ + ":" + std::to_string(max_fail_len_);
    }

private:
    std::string prefix_;
    std::size_t max_fail_len_;
    std::size_t max_len_;
    std::size_t alphabet_size_;
};

}  // namespace

std::unique_ptr<FailureModel> make_length_one_model(std::size_t max_len) {
    return std::make_unique<LengthOneModel>(max_len);
}

std::unique_ptr<FailureModel> make_qgram_region_model(std::string prefix,
                                                      std::size_t max_fail_len,
                                                      std::size_t max_len,
                                                      std::size_t alphabet_size) {
    return std::make_unique<QGramRegionModel>(std::move(prefix), max_fail_len, max_len,
                                              alphabet_size);
}

std::unique_ptr<FailureModel> parse_failure_model(const std::string& spec,
                                                  std::size_t max_len,
                                                  std::size_t alphabet_size) {
    if (spec == "length1") return make_length_one_model(max_len);
    if (spec == "always") return std::make_unique<ConstantModel>(true);
    if (spec == "never") return std::make_unique<ConstantModel>(false);
    const std::string tag = "qgram-region:";
    if (spec.rfind(tag, 0) == 0) {
        const std::string rest = spec.substr(tag.size());
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= rest.size()) {
            throw std::invalid_argument("expected qgram-region:<prefix>:<maxlen>");
        }
        const std::string prefix = rest.substr(0, colon);
        const std::size_t maxlen = std::stoull(rest.substr(colon + 1));
        return make_qgram_region_model(prefix, maxlen, max_len, alphabet_size);
    }
    throw std::invalid_argument("unknown failure model: " + spec);
}

bool palindrome_sut(std::string_view input, std::chrono::nanoseconds delay) {
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
    std::size_t i = 0;
    std::size_t j = input.size();
    while (i + 1 < j) {
        if (input[i] != input[j - 1]) return false;
        ++i;
        --j;
    }
    return true;
}

const char* to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::rand: return "rand";
        case Strategy::dist: return "dist";
        case Strategy::qgram: return "qgram";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "rand") return Strategy::rand;
    if (s == "dist") return Strategy::dist;
    if (s == "qgram") return Strategy::qgram;
    throw std::invalid_argument("unknown strategy: " + s);
}

const char* to_string(MeasureKind k) noexcept {
    switch (k) {
        case MeasureKind::P: return "P";
        case MeasureKind::F: return "F";
        case MeasureKind::T: return "T";
    }
    return "?";
}

MeasureKind measure_from_string(const std::string& s) {
    if (s == "P") return MeasureKind::P;
    if (s == "F") return MeasureKind::F;
    if (s == "T") return MeasureKind::T;
    throw std::invalid_argument("unknown measure: " + s);
}

namespace {

// The palindrome SUT wired to a failure model. The palindrome check runs for
// its (possibly delayed) execution time; the mutant predicate decides failure.
class PalindromeExecutor final : public Executor {
public:
    PalindromeExecutor(const FailureModel& model, std::chrono::nanoseconds delay)
        : model_(&model), delay_(delay) {}

    ExecutionOutcome execute(const TestCase& test) override {
        if (!test.raw) throw std::invalid_argument("palindrome executor needs raw strings");
        palindrome_sut(*test.raw, delay_);
        return {.failed = model_->fails(*test.raw), .covered_targets = {}};
    }

private:
    const FailureModel* model_;
    std::chrono::nanoseconds delay_;
};

RunRecord run_one(const SimConfig& cfg, const StoppingCriterion& stop, std::uint64_t seed) {
    StringGenerator gen(cfg.max_len, cfg.alphabet);
    const auto model = parse_failure_model(cfg.failure_model, cfg.max_len, cfg.alphabet.size());
    PalindromeExecutor exec(*model, cfg.delay);
    Rng rng(seed);
    switch (cfg.strategy) {
        case Strategy::rand:
            return run_random(gen, exec, stop, rng, seed);
        case Strategy::dist:
            return run_art_dist(gen, exec, stop, cfg.w_size, rng, seed,
                                TokenizeMode::characters);
        case Strategy::qgram:
            return run_art_qgram(gen, exec, stop, cfg.w_size, cfg.q,
                                 TokenizeMode::characters, cfg.diversity, rng, seed,
                                 cfg.tokenize);
    }
    throw std::invalid_argument("unknown strategy");
}

// Runs f(i) for i in [0, n); chunked across threads when parallel.
template <typename F>
void for_each_rep(std::size_t n, bool parallel, F&& f) {
    detail::for_each_index(n, parallel ? 0 : 1, std::forward<F>(f));
}

MeasureRecord summarize(MeasureKind kind, const std::vector<RepOutcome>& outcomes,
                        double theta, double rse_threshold) {
    MeasureRecord rec;
    rec.kind = kind;
    rec.repetitions = outcomes.size();
    rec.theta_nominal = theta;
    std::vector<double> values;
    values.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        values.push_back(o.value);
        rec.censored += o.censored ? 1 : 0;
        rec.executions += o.counters.executions;
        rec.distance_calls += o.counters.distance_calls;
        rec.diversity_evals += o.counters.diversity_evals;
    }
    rec.value = values.empty() ? 0.0 : stats::mean(values);
    if (values.size() >= 2) {
        if (stats::sample_stddev(values) == 0.0) {
            rec.rse = 0.0;
        } else if (rec.value == 0.0) {
            rec.rse = std::numeric_limits<double>::infinity();
        } else {
            rec.rse = stats::relative_standard_error(values);
        }
    } else {
        rec.rse = std::numeric_limits<double>::infinity();
    }
    rec.rse_met = rec.rse <= rse_threshold;
    return rec;
}

double nominal_theta(const SimConfig& cfg) {
    return parse_failure_model(cfg.failure_model, cfg.max_len, cfg.alphabet.size())
        ->nominal_theta();
}

}  // namespace

RepOutcome run_P_repetition(const SimConfig& cfg, std::uint64_t seed) {
    const auto rec = run_one(cfg, StoppingCriterion::on_first_failure(cfg.p_tests), seed);
    return {.value = rec.saw_failure ? 1.0 : 0.0, .censored = false, .counters = rec.counters};
}

RepOutcome run_F_repetition(const SimConfig& cfg, std::uint64_t seed) {
    const auto rec = run_one(cfg, StoppingCriterion::on_first_failure(cfg.fmeasure_cap), seed);
    return {.value = static_cast<double>(rec.counters.executions),
            .censored = !rec.saw_failure,
            .counters = rec.counters};
}

RepOutcome run_T_repetition(const SimConfig& cfg, std::uint64_t seed) {
    const auto t0 = Clock::now();
    const auto rec = run_one(cfg, StoppingCriterion::on_first_failure(cfg.fmeasure_cap), seed);
    const std::chrono::duration<double> elapsed = Clock::now() - t0;
    return {.value = elapsed.count(), .censored = !rec.saw_failure, .counters = rec.counters};
}

std::vector<RepOutcome> collect_repetitions(const SimConfig& cfg, MeasureKind kind,
                                            std::size_t reps, std::uint64_t seed0,
                                            bool parallel) {
    std::vector<RepOutcome> outcomes(reps);
    for_each_rep(reps, parallel, [&](std::size_t i) {
        const std::uint64_t seed = seed0 + i;
        switch (kind) {
            case MeasureKind::P: outcomes[i] = run_P_repetition(cfg, seed); break;
            case MeasureKind::F: outcomes[i] = run_F_repetition(cfg, seed); break;
            case MeasureKind::T: outcomes[i] = run_T_repetition(cfg, seed); break;
        }
    });
    return outcomes;
}

namespace {

MeasureRecord measure_fixed(const SimConfig& cfg, MeasureKind kind, std::size_t reps,
                            std::uint64_t seed0, bool parallel) {
    return summarize(kind, collect_repetitions(cfg, kind, reps, seed0, parallel),
                     nominal_theta(cfg), 0.05);
}

}  // namespace

MeasureRecord measure_P(const SimConfig& cfg, std::size_t reps, std::uint64_t seed0,
                        bool parallel) {
    return measure_fixed(cfg, MeasureKind::P, reps, seed0, parallel);
}

MeasureRecord measure_F(const SimConfig& cfg, std::size_t reps, std::uint64_t seed0,
                        bool parallel) {
    return measure_fixed(cfg, MeasureKind::F, reps, seed0, parallel);
}

MeasureRecord measure_T(const SimConfig& cfg, std::size_t reps, std::uint64_t seed0,
                        bool parallel) {
    return measure_fixed(cfg, MeasureKind::T, reps, seed0, parallel);
}

MeasureRecord run_until_rse(const std::function<RepOutcome(std::uint64_t seed)>& one_rep,
                            MeasureKind kind, const RseOptions& opts, std::uint64_t seed0) {
    if (opts.threshold <= 0.0) throw std::invalid_argument("run_until_rse: threshold <= 0");
    if (opts.batch == 0) throw std::invalid_argument("run_until_rse: batch must be >= 1");

    std::vector<RepOutcome> outcomes;
    MeasureRecord rec;
    while (outcomes.size() < opts.max_reps) {
        const std::size_t old_size = outcomes.size();
        const std::size_t grow = std::min(opts.batch, opts.max_reps - old_size);
        outcomes.resize(old_size + grow);
        for_each_rep(grow, opts.parallel, [&](std::size_t i) {
            outcomes[old_size + i] = one_rep(seed0 + old_size + i);
        });
        rec = summarize(kind, outcomes, 0.0, opts.threshold);
        if (outcomes.size() >= 2 && rec.rse <= opts.threshold) break;
    }
    return rec;
}

MeasureRecord measure_until_rse(const SimConfig& cfg, MeasureKind kind,
                                const RseOptions& opts, std::uint64_t seed0) {
    auto one_rep = [&cfg, kind](std::uint64_t seed) {
        switch (kind) {
            case MeasureKind::P: return run_P_repetition(cfg, seed);
            case MeasureKind::F: return run_F_repetition(cfg, seed);
            case MeasureKind::T: return run_T_repetition(cfg, seed);
        }
        throw std::invalid_argument("unknown measure kind");
    };
    MeasureRecord rec = run_until_rse(one_rep, kind, opts, seed0);
    rec.theta_nominal = nominal_theta(cfg);
    return rec;
}

}  // namespace qart::sim
