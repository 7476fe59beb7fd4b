#include "qart/webgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "parallel_util.hpp"

namespace qart::webgen {

const char* to_string(Technique t) noexcept {
    switch (t) {
        case Technique::rand: return "rand";
        case Technique::dist: return "dist";
        case Technique::qgrams_s: return "qgrams_s";
        case Technique::qgrams_si: return "qgrams_si";
    }
    return "?";
}

Technique technique_from_string(const std::string& s) {
    if (s == "rand") return Technique::rand;
    if (s == "dist") return Technique::dist;
    if (s == "qgrams_s") return Technique::qgrams_s;
    if (s == "qgrams_si") return Technique::qgrams_si;
    throw std::invalid_argument("unknown technique: " + s);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t model_i, std::size_t tech_i,
                        std::size_t rep) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ (0x10001ull * (model_i + 1)));
    h = splitmix64(h ^ (0x20002ull * (tech_i + 1)));
    h = splitmix64(h ^ (0x30003ull * (rep + 1)));
    return h;
}

RunRecord run_technique(const nav::NavigationModel& model, const TechniqueConfig& tech,
                        const CampaignConfig& cfg, std::uint64_t seed) {
    auto session = nav::make_session(model, cfg.max_walk_len);
    Rng rng(seed);
    const StoppingCriterion stop = cfg.budget.count() > 0
                                       ? StoppingCriterion::within(cfg.budget)
                                       : StoppingCriterion::after_executions(cfg.max_executions);
    switch (tech.name) {
        case Technique::rand:
            return run_random(*session.generator, *session.executor, stop, rng, seed);
        case Technique::dist:
            return run_art_dist(*session.generator, *session.executor, stop, tech.w_size,
                                rng, seed, TokenizeMode::sequence_only);
        case Technique::qgrams_s:
            return run_art_qgram(*session.generator, *session.executor, stop, tech.w_size,
                                 tech.q, TokenizeMode::sequence_only,
                                 DiversityMetric::entropy, rng, seed);
        case Technique::qgrams_si:
            return run_art_qgram(*session.generator, *session.executor, stop, tech.w_size,
                                 tech.q, TokenizeMode::sequence_plus_inputs,
                                 DiversityMetric::entropy, rng, seed);
    }
    throw std::invalid_argument("unknown technique");
}

CellResult make_cell(const std::string& model_name, const nav::NavigationModel& model,
                     const TechniqueConfig& tech, std::size_t rep, std::uint64_t seed,
                     const RunRecord& record) {
    CellResult cell;
    cell.model = model_name;
    cell.technique = tech.name;
    cell.repetition = rep;
    cell.seed = seed;
    cell.trajectory.total_targets = model.total_targets();
    cell.trajectory.points.reserve(record.iterations.size());
    std::uint64_t execs = 0;
    for (const auto& it : record.iterations) {
        ++execs;
        cell.trajectory.points.emplace_back(execs, it.covered_after);
        cell.lengths.push_back(it.test_length);
    }
    cell.covered.insert(record.covered.begin(), record.covered.end());
    cell.exec_tests = record.counters.executions;
    cell.counters = record.counters;
    cell.coverage_pct = model.total_targets() == 0
                            ? 0.0
                            : 100.0 * static_cast<double>(cell.covered.size()) /
                                  static_cast<double>(model.total_targets());
    if (!cell.lengths.empty()) {
        double sum = 0.0;
        for (auto l : cell.lengths) sum += static_cast<double>(l);
        cell.mean_length = sum / static_cast<double>(cell.lengths.size());
    }
    if (record.counters.executions > 0) {
        const double n = static_cast<double>(record.counters.executions);
        cell.mean_exec_time_s =
            std::chrono::duration<double>(record.counters.wall_execution_time).count() / n;
        cell.mean_gen_time_s =
            std::chrono::duration<double>(record.counters.wall_selection_time).count() / n;
    }
    return cell;
}

}  // namespace

double auc(const CoverageTrajectory& trajectory, double fraction,
           std::uint64_t common_max_executions) {
    if (trajectory.points.empty()) throw std::invalid_argument("auc: empty trajectory");
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw std::invalid_argument("auc: fraction must lie in (0, 1]");
    }
    if (common_max_executions == 0) throw std::invalid_argument("auc: zero max executions");
    const double total = static_cast<double>(trajectory.total_targets);
    if (total == 0.0) return 0.0;

    const std::uint64_t horizon = static_cast<std::uint64_t>(
        std::ceil(fraction * static_cast<double>(common_max_executions)));
    // Right-pad with the final coverage value, then sum the per-execution
    // coverage percentages; normalize by the full-horizon 100% rectangle.
    double area = 0.0;
    const auto& pts = trajectory.points;
    for (std::uint64_t i = 0; i < horizon; ++i) {
        const std::uint64_t covered =
            i < pts.size() ? pts[i].second : pts.back().second;
        area += 100.0 * static_cast<double>(covered) / total;
    }
    return area / (static_cast<double>(common_max_executions) * 100.0);
}

std::map<std::string, std::uint64_t> unique_targets(
    const std::map<std::string, std::set<TargetId>>& covered_by_technique) {
    std::map<std::string, std::uint64_t> out;
    for (const auto& [tech, covered] : covered_by_technique) {
        std::set<TargetId> others;
        for (const auto& [other_tech, other_covered] : covered_by_technique) {
            if (other_tech == tech) continue;
            others.insert(other_covered.begin(), other_covered.end());
        }
        std::uint64_t unique = 0;
        for (const auto& t : covered) {
            if (!others.count(t)) ++unique;
        }
        out[tech] = unique;
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> length_trajectory(
    std::span<const std::size_t> lengths, std::size_t window) {
    if (window == 0) throw std::invalid_argument("length_trajectory: window must be >= 1");
    std::vector<std::pair<std::size_t, double>> out;
    if (lengths.size() < window) return out;
    double running = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        running += static_cast<double>(lengths[i]);
        if (i + 1 >= window) {
            if (i + 1 > window) running -= static_cast<double>(lengths[i - window]);
            out.emplace_back(i + 1, running / static_cast<double>(window));
        }
    }
    return out;
}

std::set<TargetId> hard_targets(const nav::NavigationModel& model,
                                const std::vector<std::set<TargetId>>& rand_covered) {
    if (rand_covered.empty()) {
        throw std::invalid_argument("hard_targets: need at least one random run");
    }
    std::set<TargetId> covered_union;
    for (const auto& c : rand_covered) covered_union.insert(c.begin(), c.end());
    std::set<TargetId> out;
    for (const auto& e : model.edges) {
        if (!covered_union.count(e.id)) out.insert(e.id);
    }
    return out;
}

CampaignResult run_campaign(const std::vector<NamedModel>& models,
                            const std::vector<TechniqueConfig>& techniques,
                            const CampaignConfig& config) {
    if (config.repetitions == 0) {
        throw std::invalid_argument("run_campaign: repetitions must be >= 1");
    }
    CampaignResult result;

    struct Job {
        std::size_t model_i, tech_i, rep;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        for (std::size_t ti = 0; ti < techniques.size(); ++ti) {
            for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                jobs.push_back({mi, ti, rep, cell_seed(config.seed, mi, ti, rep)});
            }
        }
    }

    std::vector<CellResult> cells(jobs.size());
    std::vector<std::string> errors(jobs.size());
    detail::for_each_index(jobs.size(), config.threads, [&](std::size_t j) {
        const Job& job = jobs[j];
        const auto& [name, model] = models[job.model_i];
        try {
            const RunRecord record =
                run_technique(model, techniques[job.tech_i], config, job.seed);
            cells[j] = make_cell(name, model, techniques[job.tech_i], job.rep, job.seed,
                                 record);
        } catch (const std::exception& e) {
            errors[j] = name + ": " + e.what();
        }
    });
    for (auto& e : errors) {
        if (!e.empty()) result.model_errors.push_back(std::move(e));
    }

    // Single-threaded reduce: per (model, repetition) group, pad to the common
    // execution horizon for AUC and compute per-repetition unique targets.
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
            std::vector<std::size_t> group;
            std::uint64_t common_max = 0;
            for (std::size_t j = 0; j < jobs.size(); ++j) {
                if (jobs[j].model_i != mi || jobs[j].rep != rep || !errors[j].empty()) continue;
                group.push_back(j);
                common_max = std::max(common_max, cells[j].exec_tests);
            }
            if (group.empty() || common_max == 0) continue;
            std::map<std::string, std::set<TargetId>> by_tech;
            for (const std::size_t j : group) {
                cells[j].auc = auc(cells[j].trajectory, 1.0, common_max);
                cells[j].auc_at_20 = auc(cells[j].trajectory, 0.2, common_max);
                by_tech[to_string(cells[j].technique)] = cells[j].covered;
            }
            const auto uniques = unique_targets(by_tech);
            for (const std::size_t j : group) {
                cells[j].unique_targets = uniques.at(to_string(cells[j].technique));
            }
        }
    }

    for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (errors[j].empty()) result.cells.push_back(std::move(cells[j]));
    }
    return result;
}

void write_campaign_csv(const CampaignResult& result, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "trajectories");

    std::ofstream summary(out_dir / "summary.csv");
    summary << "model,technique,repetition,seed,coverage_pct,auc,auc_at_20,unique_targets,"
               "exec_tests,mean_length,mean_exec_time_s,mean_gen_time_s,distance_calls,"
               "diversity_evals\n";
    std::ofstream uniques(out_dir / "uniques.csv");
    uniques << "model,repetition,technique,unique_targets\n";

    for (const auto& c : result.cells) {
        summary << c.model << ',' << to_string(c.technique) << ',' << c.repetition << ','
                << c.seed << ',' << c.coverage_pct << ',' << c.auc << ',' << c.auc_at_20
                << ',' << c.unique_targets << ',' << c.exec_tests << ',' << c.mean_length
                << ',' << c.mean_exec_time_s << ',' << c.mean_gen_time_s << ','
                << c.counters.distance_calls << ',' << c.counters.diversity_evals << '\n';
        uniques << c.model << ',' << c.repetition << ',' << to_string(c.technique) << ','
                << c.unique_targets << '\n';

        std::ofstream traj(out_dir / "trajectories" /
                           (c.model + "_" + to_string(c.technique) + "_" +
                            std::to_string(c.repetition) + ".csv"));
        traj << "executions,covered,length\n";
        for (std::size_t i = 0; i < c.trajectory.points.size(); ++i) {
            traj << c.trajectory.points[i].first << ',' << c.trajectory.points[i].second
                 << ',' << (i < c.lengths.size() ? c.lengths[i] : 0) << '\n';
        }
    }
}

}  // namespace qart::webgen
