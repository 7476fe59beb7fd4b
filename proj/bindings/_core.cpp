// Python bindings for the qart core: tokenization, q-gram aggregation,
// distances, selectors, the simulation and navigation-model harnesses, and
// the statistics kit.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <chrono>
#include <sstream>

#include "qart/distance.hpp"
#include "qart/navmodel.hpp"
#include "qart/qgram.hpp"
#include "qart/selectors.hpp"
#include "qart/simulation.hpp"
#include "qart/stats.hpp"
#include "qart/webgen.hpp"

namespace py = pybind11;
using namespace qart;

namespace {

Value value_from_py(const py::handle& h) {
    if (py::isinstance<py::bool_>(h)) return static_cast<std::int64_t>(h.cast<bool>());
    if (py::isinstance<py::int_>(h)) return h.cast<std::int64_t>();
    if (py::isinstance<py::float_>(h)) return h.cast<double>();
    if (py::isinstance<py::str>(h)) return h.cast<std::string>();
    throw py::type_error("argument values must be int, float, str or bool");
}

TestCase testcase_from_actions(const py::sequence& actions) {
    std::vector<Action> out;
    for (const auto& item : actions) {
        const auto pair = item.cast<py::sequence>();
        Action a;
        a.method = pair[0].cast<std::string>();
        if (py::len(pair) > 1) {
            for (const auto& v : pair[1].cast<py::sequence>()) {
                a.args.push_back(value_from_py(v));
            }
        }
        out.push_back(std::move(a));
    }
    return TestCase::from_actions(std::move(out));
}

py::dict counts_to_dict(const QGramCounts& c) {
    py::dict d;
    for (const auto& [g, n] : c.entries()) {
        py::tuple key(g.tokens.size());
        for (std::size_t i = 0; i < g.tokens.size(); ++i) key[i] = g.tokens[i];
        d[key] = n;
    }
    return d;
}

py::dict measure_to_dict(const sim::MeasureRecord& rec) {
    py::dict d;
    d["measure"] = sim::to_string(rec.kind);
    d["value"] = rec.value;
    d["repetitions"] = rec.repetitions;
    d["rse"] = rec.rse;
    d["rse_met"] = rec.rse_met;
    d["censored"] = rec.censored;
    d["theta_nominal"] = rec.theta_nominal;
    d["executions"] = rec.executions;
    d["distance_calls"] = rec.distance_calls;
    d["diversity_evals"] = rec.diversity_evals;
    return d;
}

sim::SimConfig make_sim_config(const std::string& strategy, std::size_t L,
                               const std::string& failure_model, std::size_t w,
                               std::size_t q, double delay_ms,
                               const std::string& alphabet, std::uint64_t fmeasure_cap) {
    sim::SimConfig cfg;
    cfg.strategy = sim::strategy_from_string(strategy);
    cfg.max_len = L;
    if (!alphabet.empty()) cfg.alphabet = alphabet;
    cfg.w_size = w;
    cfg.q = q;
    cfg.delay = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::duration<double, std::milli>(delay_ms));
    cfg.failure_model = failure_model;
    cfg.fmeasure_cap = fmeasure_cap;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adaptive random testing with incremental q-gram aggregation";

    py::class_<TestCase>(m, "TestCase")
        .def_static("from_string", &TestCase::from_string, py::arg("s"))
        .def_static("from_actions", &testcase_from_actions, py::arg("actions"))
        .def_property_readonly("raw",
                               [](const TestCase& t) -> py::object {
                                   if (!t.raw) return py::none();
                                   return py::str(*t.raw);
                               })
        .def_property_readonly("actions",
                               [](const TestCase& t) {
                                   py::list out;
                                   for (const auto& a : t.actions) {
                                       py::list args;
                                       for (const auto& v : a.args) {
                                           std::visit([&](const auto& x) { args.append(x); },
                                                      v);
                                       }
                                       out.append(py::make_tuple(a.method, args));
                                   }
                                   return out;
                               })
        .def("__len__", &TestCase::length);

    m.def(
        "tokenize",
        [](const TestCase& t, const std::string& mode, bool sentinels) {
            TokenizeOptions opts{.char_sentinels = sentinels};
            std::vector<std::string> out;
            for (const auto& tok : tokenize(t, tokenize_mode_from_string(mode), opts)) {
                out.push_back(tok.text);
            }
            return out;
        },
        py::arg("test"), py::arg("mode") = "sequence_only", py::arg("sentinels") = false,
        "Token texts of a test case under the given tokenization mode");

    py::class_<QGramCounts>(m, "QGramCounts")
        .def(py::init<>())
        .def_property_readonly("total", &QGramCounts::total)
        .def_property_readonly("distinct", &QGramCounts::distinct)
        .def("counts", &counts_to_dict)
        .def("entropy_bits", &QGramCounts::entropy_bits)
        .def("gini_impurity", &QGramCounts::gini_impurity)
        .def("merge_in", &QGramCounts::merge_in, py::arg("delta"))
        .def("count",
             [](const QGramCounts& c, const std::vector<std::string>& key) {
                 return c.count(QGram{key});
             },
             py::arg("key"));

    m.def(
        "count_qgrams",
        [](const TestCase& t, std::size_t q, const std::string& mode, bool sentinels) {
            TokenizeOptions opts{.char_sentinels = sentinels};
            return count_qgrams(tokenize(t, tokenize_mode_from_string(mode), opts), q);
        },
        py::arg("test"), py::arg("q") = 2, py::arg("mode") = "sequence_only",
        py::arg("sentinels") = false);

    m.def("merge", [](const QGramCounts& a, const QGramCounts& b) { return merge(a, b); });

    m.def(
        "score_candidate",
        [](const QGramCounts& archive, const TestCase& cand, std::size_t q,
           const std::string& mode, const std::string& metric, bool sentinels) {
            TokenizeOptions opts{.char_sentinels = sentinels};
            return score_candidate(archive, cand, q, tokenize_mode_from_string(mode),
                                   metric == "gini" ? DiversityMetric::gini
                                                    : DiversityMetric::entropy,
                                   opts);
        },
        py::arg("archive"), py::arg("candidate"), py::arg("q") = 2,
        py::arg("mode") = "sequence_only", py::arg("metric") = "entropy",
        py::arg("sentinels") = false);

    m.def(
        "edit_distance",
        [](const TestCase& a, const TestCase& b, const std::string& mode) {
            const auto ta = tokenize(a, tokenize_mode_from_string(mode));
            const auto tb = tokenize(b, tokenize_mode_from_string(mode));
            return edit_distance(ta, tb);
        },
        py::arg("a"), py::arg("b"), py::arg("mode") = "sequence_only");

    m.def(
        "min_distance_to_archive",
        [](const TestCase& cand, const std::vector<TestCase>& archive,
           const std::string& mode) {
            return min_distance_to_archive(cand, archive, tokenize_mode_from_string(mode));
        },
        py::arg("candidate"), py::arg("archive"), py::arg("mode") = "sequence_only");

    m.def("select_argmax",
          [](const std::vector<double>& scores) { return select_argmax(scores); },
          py::arg("scores"));

    m.def(
        "breakeven_factor",
        [](double theta, std::size_t w, const std::string& algo) {
            return breakeven_factor(theta, w,
                                    algo == "dist" ? BreakevenAlgo::dist
                                                   : BreakevenAlgo::qgram);
        },
        py::arg("theta"), py::arg("w_size"), py::arg("algo"));

    m.def("expected_distance_calls", &expected_distance_calls, py::arg("w"), py::arg("rho"));
    m.def("expected_diversity_evals", &expected_diversity_evals, py::arg("w"),
          py::arg("rho"));

    // simulation
    m.def(
        "palindrome_sut",
        [](const std::string& s, double delay_ms) {
            return sim::palindrome_sut(
                s, std::chrono::duration_cast<std::chrono::nanoseconds>(
                       std::chrono::duration<double, std::milli>(delay_ms)));
        },
        py::arg("input"), py::arg("delay_ms") = 0.0);

    m.def(
        "simulate_measure",
        [](const std::string& strategy, std::size_t L, const std::string& measure,
           py::object reps, const std::string& failure_model, std::size_t w, std::size_t q,
           double delay_ms, double rse_threshold, std::size_t batch, std::size_t max_reps,
           std::uint64_t seed, const std::string& alphabet, std::uint64_t fmeasure_cap,
           bool parallel) {
            const auto cfg = make_sim_config(strategy, L, failure_model, w, q, delay_ms,
                                             alphabet, fmeasure_cap);
            const auto kind = sim::measure_from_string(measure);
            sim::MeasureRecord rec;
            if (reps.is_none()) {
                rec = sim::measure_until_rse(
                    cfg, kind,
                    {.threshold = rse_threshold, .batch = batch, .max_reps = max_reps,
                     .parallel = parallel},
                    seed);
            } else {
                const auto n = reps.cast<std::size_t>();
                switch (kind) {
                    case sim::MeasureKind::P: rec = sim::measure_P(cfg, n, seed, parallel); break;
                    case sim::MeasureKind::F: rec = sim::measure_F(cfg, n, seed, parallel); break;
                    case sim::MeasureKind::T: rec = sim::measure_T(cfg, n, seed, false); break;
                }
            }
            return measure_to_dict(rec);
        },
        py::arg("strategy"), py::arg("L"), py::arg("measure") = "F",
        py::arg("reps") = py::none(), py::arg("failure_model") = "length1",
        py::arg("w_size") = 10, py::arg("q") = 2, py::arg("delay_ms") = 0.0,
        py::arg("rse_threshold") = 0.05, py::arg("batch") = 50,
        py::arg("max_reps") = 100000, py::arg("seed") = 1, py::arg("alphabet") = "",
        py::arg("fmeasure_cap") = 10'000'000, py::arg("parallel") = true);

    // statistics
    m.def(
        "wilcoxon_rank_sum",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const auto r = stats::wilcoxon_rank_sum(x, y);
            py::dict d;
            d["p_value"] = r.p_value;
            d["statistic"] = r.statistic;
            d["exact"] = r.exact;
            return d;
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "vargha_delaney",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const auto e = stats::vargha_delaney(x, y);
            py::dict d;
            d["a12"] = e.a12;
            d["magnitude"] = stats::to_string(e.magnitude);
            return d;
        },
        py::arg("x"), py::arg("y"));
    m.def("relative_standard_error",
          [](const std::vector<double>& s) { return stats::relative_standard_error(s); },
          py::arg("sample"));

    // navigation models
    py::class_<nav::NavigationModel>(m, "NavigationModel")
        .def_property_readonly("name",
                               [](const nav::NavigationModel& mdl) { return mdl.name; })
        .def_property_readonly("home",
                               [](const nav::NavigationModel& mdl) { return mdl.home; })
        .def_property_readonly("nodes",
                               [](const nav::NavigationModel& mdl) { return mdl.nodes; })
        .def_property_readonly("total_targets", &nav::NavigationModel::total_targets)
        .def("target_ids", &nav::NavigationModel::target_ids);

    m.def("load_model_file",
          [](const std::filesystem::path& p) { return nav::load_model_file(p); },
          py::arg("path"));
    m.def(
        "load_model",
        [](const std::string& document) {
            return nav::load_model(nlohmann::json::parse(document));
        },
        py::arg("json_text"));

    m.def(
        "execute_test",
        [](const nav::NavigationModel& model, const TestCase& test) {
            const auto out = nav::execute_test(model, test);
            py::dict d;
            d["failed"] = out.failed;
            d["covered_targets"] = out.covered_targets;
            return d;
        },
        py::arg("model"), py::arg("test"));

    m.def(
        "generate_candidate",
        [](const nav::NavigationModel& model, const std::set<std::string>& covered,
           std::size_t max_walk_len, std::uint64_t seed) {
            Rng rng(seed);
            std::unordered_set<TargetId> cov(covered.begin(), covered.end());
            return nav::generate_candidate(model, cov, max_walk_len, rng);
        },
        py::arg("model"), py::arg("covered") = std::set<std::string>{},
        py::arg("max_walk_len") = 40, py::arg("seed") = 1);

    // campaign
    m.def(
        "run_campaign",
        [](const std::vector<std::string>& model_files,
           const std::vector<std::string>& techniques, std::size_t reps,
           std::uint64_t max_executions, std::size_t w, std::size_t q, std::uint64_t seed,
           std::size_t threads, std::size_t max_walk_len) {
            std::vector<webgen::NamedModel> models;
            for (const auto& f : model_files) {
                auto mdl = nav::load_model_file(f);
                const std::string name = mdl.name;
                models.emplace_back(name, std::move(mdl));
            }
            std::vector<webgen::TechniqueConfig> techs;
            for (const auto& t : techniques) {
                techs.push_back({webgen::technique_from_string(t), w, q});
            }
            webgen::CampaignConfig cfg;
            cfg.repetitions = reps;
            cfg.max_executions = max_executions;
            cfg.w_size = w;
            cfg.q = q;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.max_walk_len = max_walk_len;
            const auto result = webgen::run_campaign(models, techs, cfg);
            py::list cells;
            for (const auto& c : result.cells) {
                py::dict d;
                d["model"] = c.model;
                d["technique"] = webgen::to_string(c.technique);
                d["repetition"] = c.repetition;
                d["seed"] = c.seed;
                d["coverage_pct"] = c.coverage_pct;
                d["auc"] = c.auc;
                d["auc_at_20"] = c.auc_at_20;
                d["unique_targets"] = c.unique_targets;
                d["exec_tests"] = c.exec_tests;
                d["mean_length"] = c.mean_length;
                d["covered"] = std::vector<TargetId>(c.covered.begin(), c.covered.end());
                d["distance_calls"] = c.counters.distance_calls;
                d["diversity_evals"] = c.counters.diversity_evals;
                cells.append(d);
            }
            return cells;
        },
        py::arg("model_files"), py::arg("techniques"), py::arg("reps") = 5,
        py::arg("max_executions") = 2000, py::arg("w_size") = 30, py::arg("q") = 2,
        py::arg("seed") = 1, py::arg("threads") = 0, py::arg("max_walk_len") = 40);

    m.def(
        "hard_targets",
        [](const nav::NavigationModel& model,
           const std::vector<std::set<std::string>>& rand_covered) {
            std::vector<std::set<TargetId>> sets(rand_covered.begin(), rand_covered.end());
            const auto hard = webgen::hard_targets(model, sets);
            return std::vector<TargetId>(hard.begin(), hard.end());
        },
        py::arg("model"), py::arg("rand_covered"));

    m.attr("__version__") = "0.1.0";
}
