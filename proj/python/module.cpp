// Python bindings for the main operations: weighted measures, tilting,
// bootstrap bounds and the classical baselines.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mabt/api.hpp"
#include "mabt/baselines.hpp"
#include "mabt/maxt.hpp"
#include "mabt/measures.hpp"
#include "mabt/resample.hpp"
#include "mabt/selection.hpp"
#include "mabt/tilting.hpp"

namespace py = pybind11;

namespace {

mabt::WeightVector make_weights(const std::optional<std::vector<double>>& w, std::size_t n) {
    if (!w) return mabt::WeightVector::uniform(n);
    return mabt::WeightVector(*w);
}

mabt::EvaluationTable make_table(const std::vector<int>& labels,
                                 const std::vector<std::vector<double>>& columns,
                                 std::optional<std::vector<std::string>> model_ids) {
    mabt::EvaluationTable table;
    table.labels = labels;
    table.predictions = columns;
    if (model_ids) {
        table.model_ids = std::move(*model_ids);
    } else {
        for (std::size_t j = 0; j < columns.size(); ++j)
            table.model_ids.push_back("model_" + std::to_string(j));
    }
    return table;
}

py::dict result_dict(const mabt::MethodResult& r) {
    py::dict d;
    d["lower"] = r.lower;
    d["alpha_nominal"] = r.alpha_nominal;
    d["alpha_adjusted"] = r.alpha_adjusted;
    d["fallback_used"] = r.fallback_used;
    if (r.tau_valid) {
        d["tau"] = r.tau;
        d["achieved_level"] = r.achieved_level;
        d["iterations"] = r.iterations;
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lower confidence bounds for selected prediction models: "
              "bootstrap tilting with a maxT multiplicity adjustment, plus "
              "classical baseline intervals.";

    m.def(
        "weighted_accuracy",
        [](const std::vector<int>& labels, const std::vector<int>& preds,
           const std::optional<std::vector<double>>& weights) {
            return mabt::weighted_accuracy(labels, preds, make_weights(weights, labels.size()));
        },
        py::arg("labels"), py::arg("predictions"), py::arg("weights") = std::nullopt);

    m.def(
        "weighted_auc",
        [](const std::vector<int>& labels, const std::vector<double>& scores,
           const std::optional<std::vector<double>>& weights) {
            return mabt::weighted_auc(labels, scores, make_weights(weights, labels.size()));
        },
        py::arg("labels"), py::arg("scores"), py::arg("weights") = std::nullopt);

    m.def(
        "influence_scores",
        [](const std::string& measure, const std::vector<int>& labels,
           const std::vector<double>& preds) {
            return mabt::influence_scores(mabt::measure_from_string(measure), labels, preds);
        },
        py::arg("measure"), py::arg("labels"), py::arg("predictions"));

    m.def(
        "tilt_weights",
        [](const std::vector<double>& z, double tau) {
            const auto w = mabt::tilt_weights(mabt::make_tilting_family(z), tau);
            return std::vector<double>(w.values().begin(), w.values().end());
        },
        py::arg("z"), py::arg("tau"));

    m.def("sidak_adjust", &mabt::sidak_adjust, py::arg("alpha"), py::arg("m"));
    m.def("normal_quantile", &mabt::normal_quantile, py::arg("p"));

    m.def(
        "wald_lower",
        [](int successes, int trials, double alpha) {
            return mabt::wald_lower({successes, trials}, alpha);
        },
        py::arg("successes"), py::arg("trials"), py::arg("alpha") = 0.05);
    m.def(
        "wilson_lower",
        [](int successes, int trials, double alpha) {
            return mabt::wilson_lower({successes, trials}, alpha);
        },
        py::arg("successes"), py::arg("trials"), py::arg("alpha") = 0.05);
    m.def(
        "cp_lower",
        [](int successes, int trials, double alpha) {
            return mabt::cp_lower({successes, trials}, alpha);
        },
        py::arg("successes"), py::arg("trials"), py::arg("alpha") = 0.05);

    m.def(
        "delong_components",
        [](const std::vector<int>& labels, const std::vector<double>& scores) {
            const auto s = mabt::delong_components(labels, scores);
            py::dict d;
            d["auc"] = s.auc;
            d["variance"] = s.variance;
            d["n_pos"] = s.n_pos;
            d["n_neg"] = s.n_neg;
            return d;
        },
        py::arg("labels"), py::arg("scores"));
    m.def(
        "delong_lower",
        [](const std::vector<int>& labels, const std::vector<double>& scores, double alpha) {
            return mabt::delong_lower(mabt::delong_components(labels, scores), alpha);
        },
        py::arg("labels"), py::arg("scores"), py::arg("alpha") = 0.05);
    m.def(
        "hm_lower",
        [](double auc, int n_pos, int n_neg, double alpha) {
            mabt::AucSummary s;
            s.auc = auc;
            s.n_pos = n_pos;
            s.n_neg = n_neg;
            return mabt::hm_lower(s, alpha);
        },
        py::arg("auc"), py::arg("n_pos"), py::arg("n_neg"), py::arg("alpha") = 0.05);

    m.def(
        "draw_resample_counts",
        [](int n, int B, std::uint64_t seed) {
            const auto plan = mabt::draw_resamples(n, B, seed);
            std::vector<std::vector<std::uint32_t>> rows(plan.B);
            for (int b = 0; b < plan.B; ++b) {
                const auto row = plan.row(b);
                rows[b].assign(row.begin(), row.end());
            }
            return rows;
        },
        py::arg("n"), py::arg("B"), py::arg("seed") = 1);

    m.def("kfold_indices", &mabt::kfold_indices, py::arg("n"), py::arg("k"),
          py::arg("seed") = 0);

    m.def(
        "compute_bounds",
        [](const std::vector<int>& labels, const std::vector<std::vector<double>>& columns,
           const std::string& measure, const std::string& methods, double alpha, int B,
           std::uint64_t seed, std::optional<std::vector<std::string>> model_ids) {
            const auto kind = mabt::measure_from_string(measure);
            const auto table = make_table(labels, columns, std::move(model_ids));
            const auto report = mabt::compute_bounds(
                table, kind, mabt::parse_method_list(methods), alpha, B, seed);
            py::dict d;
            d["measure"] = measure;
            d["alpha"] = report.alpha;
            d["B"] = report.B;
            d["seed"] = report.seed;
            d["n"] = report.n;
            d["m"] = report.m;
            d["degenerate_rows"] = report.degenerate_rows;
            d["selected_id"] = report.selected_id;
            d["selected_index"] = report.selected_index;
            d["theta_hat"] = report.theta_hat;
            d["plugin"] = report.plugin;
            py::dict bounds;
            for (const auto& [spec, result] : report.bounds)
                bounds[spec.id().c_str()] = result_dict(result);
            d["bounds"] = bounds;
            return d;
        },
        py::arg("labels"), py::arg("predictions"), py::arg("measure"), py::arg("methods"),
        py::arg("alpha") = 0.05, py::arg("B") = 0, py::arg("seed") = 1,
        py::arg("model_ids") = std::nullopt,
        "Bootstrap ensemble + final selection + every requested bound for the "
        "selected model. `predictions` is a list of per-model columns.");

    m.def(
        "simultaneous_bounds",
        [](const std::vector<int>& labels, const std::vector<std::vector<double>>& columns,
           const std::string& measure, double alpha, int B, std::uint64_t seed,
           std::optional<std::vector<std::string>> model_ids) {
            const auto kind = mabt::measure_from_string(measure);
            const auto table = make_table(labels, columns, std::move(model_ids));
            table.validate(kind);
            const int resamples = B == 0 ? mabt::default_resamples(kind) : B;
            const auto plan =
                mabt::draw_resamples(static_cast<int>(table.n()), resamples, seed);
            const auto ensemble = mabt::bootstrap_performance(table, kind, plan);
            py::list out;
            for (const auto& mb : mabt::simultaneous_bounds(table, kind, ensemble, alpha)) {
                py::dict d;
                d["model_id"] = mb.model_id;
                d["ok"] = mb.ok;
                if (mb.ok) {
                    d["lower"] = mb.result.lower_bound;
                    d["tau"] = mb.result.tau;
                    d["fallback_used"] = mb.result.fallback_used;
                } else {
                    d["error"] = mb.error;
                }
                out.append(d);
            }
            return out;
        },
        py::arg("labels"), py::arg("predictions"), py::arg("measure"), py::arg("alpha") = 0.05,
        py::arg("B") = 0, py::arg("seed") = 1, py::arg("model_ids") = std::nullopt,
        "Simultaneous MABT lower bounds for every model column.");
}
