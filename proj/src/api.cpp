#include "mabt/api.hpp"

#include "mabt/resample.hpp"
#include "mabt/selection.hpp"

namespace mabt {

BoundReport compute_bounds(const EvaluationTable& data, MeasureKind kind,
                           const std::vector<MethodSpec>& methods, double alpha, int B,
                           std::uint64_t seed, int threads) {
    data.validate(kind);
    if (methods.empty()) throw std::invalid_argument("no methods requested");
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
    if (B == 0) B = default_resamples(kind);
    if (B < 100) throw std::invalid_argument("B must be >= 100");

    for (const auto& method : methods) {
        if (!method_supports_measure(method, kind))
            throw std::invalid_argument("method '" + method.id() + "' does not apply to " +
                                        to_string(kind));
        if (!method_supports_m(method, data.m()))
            throw std::invalid_argument("mabt needs at least two model columns; "
                                        "use bt for a single model");
    }

    const auto plan = draw_resamples(static_cast<int>(data.n()), B, seed);
    const auto ensemble = bootstrap_performance(data, kind, plan, threads);

    BoundReport report;
    report.kind = kind;
    report.alpha = alpha;
    report.B = B;
    report.seed = seed;
    report.threads = threads;
    report.n = data.n();
    report.m = data.m();
    report.degenerate_rows = ensemble.degenerate_rows;
    report.plugin = ensemble.plugin;
    report.selected_index = final_select(ensemble.plugin);
    report.selected_id = data.model_ids[report.selected_index];
    report.theta_hat = ensemble.plugin[report.selected_index];

    for (const auto& method : methods)
        report.bounds.emplace_back(
            method, compute_method_bound(method, data, kind, report.selected_index, ensemble,
                                         alpha));
    return report;
}

} // namespace mabt
