// qart: ART with q-gram aggregation, classical distance-based ART and random
// testing, plus the simulation and navigation-model experiment harnesses.
#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qart/navmodel.hpp"
#include "qart/selectors.hpp"
#include "qart/simulation.hpp"
#include "qart/stats.hpp"
#include "qart/webgen.hpp"

namespace {

using namespace qart;

int run_simulate(const std::string& strategy, std::size_t L, const std::string& measure,
                 double delay_ms, std::size_t W, std::size_t Q, const std::string& mode,
                 const std::string& failure_model, double rse_threshold,
                 std::size_t max_reps, std::size_t batch, std::uint64_t seed,
                 const std::string& out, const std::string& alphabet,
                 std::uint64_t fmeasure_cap, bool sentinels) {
    sim::SimConfig cfg;
    cfg.strategy = sim::strategy_from_string(strategy);
    cfg.max_len = L;
    if (!alphabet.empty()) cfg.alphabet = alphabet;
    cfg.w_size = W;
    cfg.q = Q;
    cfg.tokenize.char_sentinels = sentinels;
    cfg.delay = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::duration<double, std::milli>(delay_ms));
    cfg.failure_model = failure_model;
    cfg.fmeasure_cap = fmeasure_cap;
    if (mode != "characters") {
        throw CLI::ValidationError("--mode", "simulate supports characters mode only");
    }

    const auto kind = sim::measure_from_string(measure);
    sim::RseOptions opts;
    opts.threshold = rse_threshold;
    opts.max_reps = max_reps;
    opts.batch = batch;
    opts.parallel = kind != sim::MeasureKind::T;  // timing runs stay sequential

    const auto rec = sim::measure_until_rse(cfg, kind, opts, seed);

    nlohmann::json j{{"strategy", strategy},
                     {"L", L},
                     {"theta_nominal", rec.theta_nominal},
                     {"measure", sim::to_string(rec.kind)},
                     {"value", rec.value},
                     {"rse", rec.rse},
                     {"rse_met", rec.rse_met},
                     {"reps", rec.repetitions},
                     {"censored", rec.censored},
                     {"seed", seed},
                     {"executions", rec.executions},
                     {"distance_calls", rec.distance_calls},
                     {"diversity_evals", rec.diversity_evals}};

    auto write_csv = [&](std::ostream& os) {
        os << "strategy,L,theta_nominal,measure,value,rse,reps,seed,distance_calls,"
              "diversity_evals\n"
           << strategy << ',' << L << ',' << rec.theta_nominal << ','
           << sim::to_string(rec.kind) << ',' << rec.value << ',' << rec.rse << ','
           << rec.repetitions << ',' << seed << ',' << rec.distance_calls << ','
           << rec.diversity_evals << '\n';
    };

    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << '\n';
    } else if (out.size() >= 5 && out.substr(out.size() - 5) == ".json") {
        std::ofstream f(out);
        f << j.dump(2) << '\n';
    } else {
        std::ofstream f(out);
        write_csv(f);
    }
    std::cerr << "simulate: " << sim::to_string(rec.kind) << "(" << strategy
              << ") = " << rec.value << " over " << rec.repetitions
              << " reps, rse = " << rec.rse << (rec.rse_met ? "" : " (threshold not met)")
              << '\n';
    return 0;
}

int run_webgen(const std::vector<std::string>& model_paths,
               const std::string& techniques_csv, std::size_t reps,
               std::uint64_t max_executions, double budget_secs, std::size_t W,
               std::size_t Q, std::uint64_t seed, const std::string& out_dir,
               std::size_t max_walk_len, std::size_t threads) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& p : model_paths) {
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.path().extension() == ".json") files.push_back(entry.path());
            }
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw CLI::ValidationError("--models", "no model files found");

    std::vector<webgen::NamedModel> models;
    std::vector<std::string> load_errors;
    for (const auto& f : files) {
        try {
            auto m = nav::load_model_file(f);
            const std::string name = m.name.empty() ? f.stem().string() : m.name;
            models.emplace_back(name, std::move(m));
        } catch (const std::exception& e) {
            load_errors.push_back(e.what());
        }
    }

    std::vector<webgen::TechniqueConfig> techs;
    std::stringstream ss(techniques_csv);
    for (std::string item; std::getline(ss, item, ',');) {
        techs.push_back({webgen::technique_from_string(item), W, Q});
    }
    if (techs.empty()) throw CLI::ValidationError("--techniques", "none given");

    webgen::CampaignConfig cfg;
    cfg.repetitions = reps;
    cfg.max_executions = max_executions;
    if (budget_secs > 0) {
        cfg.budget = std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::duration<double>(budget_secs));
    }
    cfg.w_size = W;
    cfg.q = Q;
    cfg.seed = seed;
    cfg.max_walk_len = max_walk_len;
    cfg.threads = threads;

    auto result = webgen::run_campaign(models, techs, cfg);
    for (auto& e : load_errors) result.model_errors.insert(result.model_errors.begin(), e);
    webgen::write_campaign_csv(result, out_dir);

    std::cerr << "webgen: " << result.cells.size() << " cells -> " << out_dir << '\n';
    for (const auto& e : result.model_errors) std::cerr << "model error: " << e << '\n';
    return result.cells.empty() ? 1 : 0;
}

// Per-(model, metric): pairwise Wilcoxon p and Vargha-Delaney A12 across the
// techniques found in a campaign summary.csv.
int run_report(const std::string& summary_path, const std::string& out_path) {
    std::ifstream in(summary_path);
    if (!in) {
        std::cerr << "report: cannot open " << summary_path << '\n';
        return 1;
    }
    std::string header;
    std::getline(in, header);
    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    }
    const std::vector<std::string> metrics = {"coverage_pct", "auc", "auc_at_20",
                                              "unique_targets"};
    std::map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < cols.size(); ++i) col_index[cols[i]] = i;
    for (const auto& m : metrics) {
        if (!col_index.count(m)) {
            std::cerr << "report: column missing in summary: " << m << '\n';
            return 1;
        }
    }

    // (model, technique, metric) -> per-repetition values
    std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>>
        data;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) parts.push_back(c);
        if (parts.size() < cols.size()) continue;
        const std::string& model = parts[col_index.at("model")];
        const std::string& tech = parts[col_index.at("technique")];
        for (const auto& m : metrics) {
            data[model][tech][m].push_back(std::stod(parts[col_index.at(m)]));
        }
    }

    std::ofstream out(out_path);
    out << "model,metric,tech_a,tech_b,n_a,n_b,mean_a,mean_b,p_value,a12,magnitude\n";
    for (const auto& [model, by_tech] : data) {
        std::vector<std::string> techs;
        for (const auto& [t, values] : by_tech) techs.push_back(t);
        for (const auto& metric : metrics) {
            for (std::size_t i = 0; i < techs.size(); ++i) {
                for (std::size_t j = i + 1; j < techs.size(); ++j) {
                    const auto& a = by_tech.at(techs[i]).at(metric);
                    const auto& b = by_tech.at(techs[j]).at(metric);
                    if (a.empty() || b.empty()) continue;
                    const auto test = stats::wilcoxon_rank_sum(a, b);
                    const auto effect = stats::vargha_delaney(a, b);
                    out << model << ',' << metric << ',' << techs[i] << ',' << techs[j]
                        << ',' << a.size() << ',' << b.size() << ',' << stats::mean(a)
                        << ',' << stats::mean(b) << ',' << test.p_value << ','
                        << effect.a12 << ',' << stats::to_string(effect.magnitude)
                        << '\n';
                }
            }
        }
    }
    std::cerr << "report: wrote " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive random testing with q-gram aggregation"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "P/F/T-measure experiments on the palindrome string SUT");
    std::string strategy = "rand", measure = "F", mode = "characters";
    std::string failure_model = "length1", out, alphabet;
    std::size_t L = 100, W = 10, Q = 2, max_reps = 100000, batch = 50;
    double delay_ms = 0.0, rse_threshold = 0.05;
    std::uint64_t seed = 1, fmeasure_cap = 10'000'000;
    bool sentinels = false;
    simulate->add_option("--L", L, "Maximum string length (theta ~ 1/L)");
    simulate->add_option("--strategy", strategy, "rand|dist|qgram");
    simulate->add_option("--measure", measure, "P|F|T");
    simulate->add_option("--delay-ms", delay_ms, "Injected SUT delay in milliseconds");
    simulate->add_option("--W", W, "Candidate set size");
    simulate->add_option("--Q", Q, "q-gram size");
    simulate->add_option("--mode", mode, "Tokenization mode (characters)");
    simulate->add_option("--failure-model", failure_model,
                         "length1 | qgram-region:<prefix>:<maxlen> | always | never");
    simulate->add_option("--rse-threshold", rse_threshold, "Adaptive repetition target");
    simulate->add_option("--max-reps", max_reps, "Repetition cap");
    simulate->add_option("--batch", batch, "Repetitions per adaptive batch");
    simulate->add_option("--seed", seed, "Base seed (reps use seed + index)");
    simulate->add_option("--out", out, "Output path (.csv or .json; default stdout)");
    simulate->add_option("--alphabet", alphabet, "Generator alphabet (default a-z)");
    simulate->add_option("--fmeasure-cap", fmeasure_cap, "Execution cap per F/T repetition");
    simulate->add_flag("--char-sentinels", sentinels,
                       "Wrap strings in start/end sentinel tokens");

    // webgen
    auto* webgen_cmd = app.add_subcommand(
        "webgen", "RQ1-RQ4 campaign over navigation models");
    std::vector<std::string> model_paths;
    std::string techniques = "rand,dist,qgrams_s,qgrams_si", out_dir = "webgen-out";
    std::size_t reps = 5, walk_len = 40, threads = 0, webW = 30, webQ = 2;
    std::uint64_t max_executions = 2000, webseed = 1;
    double budget_secs = 0.0;
    webgen_cmd->add_option("--models", model_paths, "Model files or directories")
        ->required();
    webgen_cmd->add_option("--techniques", techniques, "Comma list of techniques");
    webgen_cmd->add_option("--reps", reps, "Repetitions per cell");
    webgen_cmd->add_option("--max-executions", max_executions, "Execution budget per run");
    webgen_cmd->add_option("--budget-secs", budget_secs,
                           "Wall budget per run (replaces --max-executions)");
    webgen_cmd->add_option("--W", webW, "Candidate set size");
    webgen_cmd->add_option("--Q", webQ, "q-gram size");
    webgen_cmd->add_option("--seed", webseed, "Campaign base seed");
    webgen_cmd->add_option("--out-dir", out_dir, "Output directory");
    webgen_cmd->add_option("--max-walk-len", walk_len, "Random walk length bound");
    webgen_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    // report
    auto* report = app.add_subcommand(
        "report", "Pairwise Wilcoxon/A12 analysis of a campaign summary");
    std::string summary = "webgen-out/summary.csv", report_out = "report.csv";
    report->add_option("--summary", summary, "Path to summary.csv");
    report->add_option("--out", report_out, "Output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return run_simulate(strategy, L, measure, delay_ms, W, Q, mode, failure_model,
                                rse_threshold, max_reps, batch, seed, out, alphabet,
                                fmeasure_cap, sentinels);
        }
        if (webgen_cmd->parsed()) {
            return run_webgen(model_paths, techniques, reps, max_executions, budget_secs,
                              webW, webQ, webseed, out_dir, walk_len, threads);
        }
        if (report->parsed()) {
            return run_report(summary, report_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
