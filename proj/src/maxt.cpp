#include "mabt/maxt.hpp"

#include <algorithm>
#include <cmath>

#include "mabt/baselines.hpp"
#include "mabt/measures.hpp"
#include "mabt/parallel.hpp"

namespace mabt {

double EcdfTransform::query(std::size_t j, double x) const {
    const auto& col = sorted_columns.at(j);
    const auto it = std::upper_bound(col.begin(), col.end(), x);
    return static_cast<double>(it - col.begin()) / static_cast<double>(B);
}

double MaxEcdf::query(double x) const {
    const auto it = std::upper_bound(sorted_max.begin(), sorted_max.end(), x);
    return static_cast<double>(it - sorted_max.begin()) /
           static_cast<double>(sorted_max.size());
}

EcdfTransform model_ecdfs(const BootstrapEnsemble& ensemble) {
    EcdfTransform out;
    out.B = ensemble.B;
    out.m = ensemble.m;
    out.sorted_columns.resize(ensemble.m);
    for (int j = 0; j < ensemble.m; ++j) {
        auto col = ensemble.model_column(j);
        std::sort(col.begin(), col.end());
        out.sorted_columns[j] = std::move(col);
    }
    out.u.resize(static_cast<std::size_t>(ensemble.B) * ensemble.m);
    for (int b = 0; b < ensemble.B; ++b)
        for (int j = 0; j < ensemble.m; ++j)
            out.u[static_cast<std::size_t>(b) * ensemble.m + j] =
                out.query(j, ensemble.value(b, j));
    return out;
}

MaxEcdf max_ecdf(const EcdfTransform& transform) {
    if (transform.m < 1) throw std::invalid_argument("transform holds no model columns");
    MaxEcdf out;
    out.sorted_max.resize(transform.B);
    for (int b = 0; b < transform.B; ++b) {
        double best = 0.0;
        for (int j = 0; j < transform.m; ++j) best = std::max(best, transform.u_value(b, j));
        out.sorted_max[b] = best;
    }
    std::sort(out.sorted_max.begin(), out.sorted_max.end());
    return out;
}

namespace {

CalibrationResult mabt_calibrate(const EvaluationTable& data, MeasureKind kind,
                                 std::size_t selected, const BootstrapEnsemble& ensemble,
                                 const MaxEcdf& fmax, double alpha,
                                 const TiltOptions& options) {
    const auto z = influence_scores(kind, data.labels, data.column(selected));

    if (is_degenerate(z)) {
        CalibrationResult result;
        result.fallback_used = true;
        const double level = sidak_adjust(alpha, ensemble.m);
        result.achieved_level = level;
        result.lower_bound = detail::degenerate_fallback_bound(data, kind, selected, z, level);
        return result;
    }

    const auto family = make_tilting_family(z, options.centered);
    const double theta_hat = ensemble.plugin[selected];
    const int n = ensemble.plan->n;
    const int B = ensemble.B;

    const auto s = detail::tilt_dot_products(*ensemble.plan, family.z);
    std::vector<int> gt;
    gt.reserve(B);
    for (int b = 0; b < B; ++b)
        if (ensemble.value(b, static_cast<int>(selected)) > theta_hat) gt.push_back(b);

    // The 1 - alpha quantile of the maximum ECDF may sit inside its top
    // atom (small discrete evaluation sets, where many resamples tie every
    // model at its maximum). No tilt can satisfy the condition then, so
    // switch to the conservative fallback at the Sidak-adjusted level, as
    // for a degenerate family.
    if (!gt.empty() && fmax.query(std::nextafter(1.0, 0.0)) < 1.0 - alpha) {
        CalibrationResult result;
        result.fallback_used = true;
        const double level = sidak_adjust(alpha, ensemble.m);
        result.achieved_level = level;
        result.lower_bound =
            detail::degenerate_fallback_bound(data, kind, selected, z, level);
        return result;
    }

    // Tilted ECDF value of theta_hat. Estimated through the complement
    //   F_tau(theta_hat) = 1 - (1/B) sum_b W_b(tau) I{theta*_b > theta_hat},
    // which sums only the resamples that negative tilts down-weight. The
    // direct <=-side sum carries the large weights and its Monte Carlo noise
    // can keep the estimate below any quantile of the maximum ECDF for every
    // tau; both forms agree exactly under exhaustive enumeration. Clamped to
    // [0,1] before the outer lookup.
    const auto margin = [&](double tau) {
        const double lme = detail::log_mean_exp(family.z, tau);
        double strict = 0.0;
        for (int b : gt) strict += std::exp(tau * s[b] - n * lme);
        strict /= static_cast<double>(B);
        double v = 1.0 - strict;
        // v may reach 1 exactly only when no resample exceeds theta_hat;
        // otherwise keep it below the top ECDF atom even when the strict
        // mass underflows.
        if (strict > 0.0 && v >= 1.0) v = std::nextafter(1.0, 0.0);
        v = std::clamp(v, 0.0, 1.0);
        return fmax.query(v) - (1.0 - alpha);
    };

    detail::CalibrateOptions copts;
    copts.width_tol = options.width_tol;
    copts.margin_tol = 1.0 / (10.0 * B);
    copts.tau_cap = options.tau_cap;
    const auto outcome = detail::calibrate_largest_tau(margin, copts);

    CalibrationResult result;
    result.tau = outcome.tau;
    result.iterations = outcome.iterations;
    result.achieved_level = alpha - outcome.margin;
    const auto p = tilt_weights(family, outcome.tau);
    result.lower_bound = std::clamp(tilted_statistic(data, kind, selected, p), 0.0, theta_hat);
    return result;
}

} // namespace

CalibrationResult mabt_lower_bound(const EvaluationTable& data, MeasureKind kind,
                                   std::size_t selected, const BootstrapEnsemble& ensemble,
                                   double alpha, const TiltOptions& options) {
    data.validate(kind);
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
    if (selected >= data.m()) throw std::invalid_argument("selected model index out of range");
    if (!ensemble.plan || ensemble.plan->n != static_cast<int>(data.n()) ||
        ensemble.m != static_cast<int>(data.m()))
        throw std::invalid_argument("ensemble does not match the evaluation table");

    const auto transform = model_ecdfs(ensemble);
    const auto fmax = max_ecdf(transform);
    return mabt_calibrate(data, kind, selected, ensemble, fmax, alpha, options);
}

std::vector<ModelBound> simultaneous_bounds(const EvaluationTable& data, MeasureKind kind,
                                            const BootstrapEnsemble& ensemble, double alpha,
                                            const TiltOptions& options, int threads) {
    data.validate(kind);
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
    if (!ensemble.plan || ensemble.plan->n != static_cast<int>(data.n()) ||
        ensemble.m != static_cast<int>(data.m()))
        throw std::invalid_argument("ensemble does not match the evaluation table");

    const auto transform = model_ecdfs(ensemble);
    const auto fmax = max_ecdf(transform);

    std::vector<ModelBound> out(data.m());
    parallel_for(data.m(), threads, [&](std::size_t j) {
        out[j].model_id = data.model_ids[j];
        try {
            out[j].result = mabt_calibrate(data, kind, j, ensemble, fmax, alpha, options);
            out[j].ok = true;
        } catch (const std::exception& ex) {
            out[j].ok = false;
            out[j].error = ex.what();
        }
    });
    return out;
}

} // namespace mabt
