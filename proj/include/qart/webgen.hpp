#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qart/navmodel.hpp"
#include "qart/selectors.hpp"

namespace qart::webgen {

enum class Technique { rand, dist, qgrams_s, qgrams_si };

const char* to_string(Technique t) noexcept;
Technique technique_from_string(const std::string& s);

struct TechniqueConfig {
    Technique name = Technique::rand;
    std::size_t w_size = 30;  // ignored by rand
    std::size_t q = 2;        // ignored by rand and dist
};

struct CoverageTrajectory {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> points;  // (executions, covered)
    std::size_t total_targets = 0;
};

struct CampaignConfig {
    std::size_t repetitions = 5;
    std::uint64_t max_executions = 2000;
    std::chrono::nanoseconds budget{0};  // when nonzero, wall budget replaces max_executions
    std::size_t w_size = 30;
    std::size_t q = 2;
    std::size_t max_walk_len = 40;
    std::uint64_t seed = 1;
    std::size_t threads = 0;  // 0 = hardware concurrency
};

// One model x technique x repetition cell.
struct CellResult {
    std::string model;
    Technique technique = Technique::rand;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;

    CoverageTrajectory trajectory;
    std::set<TargetId> covered;
    std::vector<std::size_t> lengths;  // selected-test statement counts, in order

    double coverage_pct = 0.0;
    double auc = 0.0;
    double auc_at_20 = 0.0;
    std::uint64_t unique_targets = 0;  // filled after all techniques of the repetition ran
    std::uint64_t exec_tests = 0;
    double mean_length = 0.0;
    double mean_exec_time_s = 0.0;
    double mean_gen_time_s = 0.0;
    InstrumentationCounters counters;
};

struct CampaignResult {
    std::vector<CellResult> cells;
    std::vector<std::string> model_errors;  // per-model load failures, not fatal
};

using NamedModel = std::pair<std::string, nav::NavigationModel>;

CampaignResult run_campaign(const std::vector<NamedModel>& models,
                            const std::vector<TechniqueConfig>& techniques,
                            const CampaignConfig& config);

// Area under the coverage-vs-executions curve over the first
// ceil(fraction * common_max) executions. Curves shorter than common_max are
// right-padded with their final coverage; the area is normalized by the
// common_max x 100% rectangle, so a run at full coverage from the first test
// scores exactly fraction / 1.0.
double auc(const CoverageTrajectory& trajectory, double fraction,
           std::uint64_t common_max_executions);

// Per technique: targets covered by it alone within one repetition.
std::map<std::string, std::uint64_t> unique_targets(
    const std::map<std::string, std::set<TargetId>>& covered_by_technique);

// Trailing moving average of selected-test lengths; points start at index
// `window` (1-based), so window=1 reproduces the raw lengths.
std::vector<std::pair<std::size_t, double>> length_trajectory(
    std::span<const std::size_t> lengths, std::size_t window = 100);

// Targets that random testing failed to cover in any repetition.
std::set<TargetId> hard_targets(const nav::NavigationModel& model,
                                const std::vector<std::set<TargetId>>& rand_covered);

// CSV emission: summary.csv, uniques.csv and trajectories/<model>_<tech>_<rep>.csv.
void write_campaign_csv(const CampaignResult& result, const std::filesystem::path& out_dir);

}  // namespace qart::webgen
