#include "mabt/tilting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mabt/baselines.hpp"
#include "mabt/measures.hpp"

namespace mabt {

bool is_degenerate(std::span<const double> z) {
    const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
    return *hi - *lo <= 1e-12;
}

TiltingFamily make_tilting_family(std::vector<double> z, bool centered) {
    if (z.size() < 2) throw std::invalid_argument("tilting family needs at least 2 observations");
    if (is_degenerate(z))
        throw DegenerateTilt("influence scores are constant; the empirical distribution "
                             "cannot be tilted");
    if (centered) {
        double mean = 0.0;
        for (double v : z) mean += v;
        mean /= static_cast<double>(z.size());
        for (double& v : z) v -= mean;
    }
    return TiltingFamily{std::move(z), centered};
}

WeightVector tilt_weights(const TiltingFamily& family, double tau) {
    if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
    if (is_degenerate(family.z))
        throw DegenerateTilt("influence scores are constant; the empirical distribution "
                             "cannot be tilted");
    const std::size_t n = family.z.size();
    double max_exp = -std::numeric_limits<double>::infinity();
    for (double zi : family.z) max_exp = std::max(max_exp, tau * zi);
    std::vector<double> w(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(tau * family.z[i] - max_exp);
        sum += w[i];
    }
    for (double& wi : w) wi /= sum;
    return WeightVector(std::move(w));
}

double log_importance_weight(std::span<const std::uint32_t> counts_b, const WeightVector& p,
                             int n) {
    if (counts_b.size() != p.size())
        throw std::invalid_argument("counts and weights differ in length");
    std::uint64_t sum = 0;
    for (std::uint32_t c : counts_b) sum += c;
    if (sum != static_cast<std::uint64_t>(n))
        throw std::invalid_argument("counts must sum to n");

    double logw = 0.0;
    for (std::size_t i = 0; i < counts_b.size(); ++i) {
        if (counts_b[i] == 0) continue;
        if (p[i] <= 0.0) return -std::numeric_limits<double>::infinity();
        logw += counts_b[i] * std::log(static_cast<double>(n) * p[i]);
    }
    return logw;
}

double tilted_ecdf(std::span<const double> theta_star_col, std::span<const double> logw,
                   double x) {
    if (theta_star_col.size() != logw.size())
        throw std::invalid_argument("theta* column and log-weights differ in length");
    double sum = 0.0;
    for (std::size_t b = 0; b < theta_star_col.size(); ++b)
        if (theta_star_col[b] <= x) sum += std::exp(logw[b]);
    return sum / static_cast<double>(theta_star_col.size());
}

double tilted_statistic(const EvaluationTable& data, MeasureKind kind, std::size_t model,
                        const WeightVector& p) {
    return weighted_measure(data, kind, model, p);
}

namespace detail {

double log_mean_exp(std::span<const double> z, double tau) {
    double max_exp = -std::numeric_limits<double>::infinity();
    for (double zi : z) max_exp = std::max(max_exp, tau * zi);
    double sum = 0.0;
    for (double zi : z) sum += std::exp(tau * zi - max_exp);
    return max_exp + std::log(sum / static_cast<double>(z.size()));
}

std::vector<double> tilt_dot_products(const ResamplePlan& plan, std::span<const double> z) {
    if (z.size() != static_cast<std::size_t>(plan.n))
        throw std::invalid_argument("influence scores and plan disagree on n");
    std::vector<double> s(plan.B, 0.0);
    for (int b = 0; b < plan.B; ++b) {
        const auto row = plan.row(b);
        double dot = 0.0;
        for (int i = 0; i < plan.n; ++i)
            if (row[i] != 0) dot += row[i] * z[i];
        s[b] = dot;
    }
    return s;
}

CalibrateOutcome calibrate_largest_tau(const std::function<double(double)>& margin,
                                       const CalibrateOptions& options) {
    CalibrateOutcome out;
    auto eval = [&](double tau) {
        ++out.iterations;
        const double m = margin(tau);
        return std::isfinite(m) ? m : -std::numeric_limits<double>::infinity();
    };

    // The condition may hold arbitrarily close to 0 (the observed estimate
    // already sits above nearly all resamples); the bound then collapses to
    // the plug-in value.
    double hi = -options.width_tol;
    double m_hi = eval(hi);
    if (m_hi >= 0.0) {
        out.tau = hi;
        out.margin = m_hi;
        return out;
    }

    // Scan outwards for the first feasible tau.
    double lo = -options.expand_start;
    double m_lo = eval(lo);
    while (m_lo < 0.0 && -lo <= options.tau_cap) {
        hi = lo;
        m_hi = m_lo;
        lo *= options.expand_ratio;
        if (-lo > options.tau_cap) break;
        m_lo = eval(lo);
    }

    if (m_lo < 0.0) {
        std::ostringstream msg;
        msg << "no tau in [" << -options.tau_cap << ", 0) satisfies the calibration "
            << "condition; closest margin " << m_hi << " at tau=" << hi
            << " (needs >= 0), evaluations " << out.iterations;
        throw CalibrationFailure(msg.str());
    }

    while (hi - lo > options.width_tol && std::abs(m_lo - m_hi) > options.margin_tol) {
        const double mid = 0.5 * (lo + hi);
        const double m_mid = eval(mid);
        if (m_mid >= 0.0) {
            lo = mid;
            m_lo = m_mid;
        } else {
            hi = mid;
            m_hi = m_mid;
        }
    }

    out.tau = lo;
    out.margin = m_lo;
    return out;
}

double degenerate_fallback_bound(const EvaluationTable& data, MeasureKind kind,
                                 std::size_t model, std::span<const double> z, double level) {
    if (kind == MeasureKind::Accuracy) {
        // z is constant 0 or 1; the number correct is its sum.
        double correct = 0.0;
        for (double zi : z) correct += zi;
        BinomialSummary summary{static_cast<int>(std::lround(correct)),
                                static_cast<int>(data.n())};
        return cp_lower(summary, level);
    }

    // AUC: Hanley-McNeil when its variance is positive, else the trivial 0.
    int n_pos = 0;
    for (int y : data.labels) n_pos += y;
    AucSummary summary;
    summary.auc = weighted_measure(data, kind, model, WeightVector::uniform(data.n()));
    summary.n_pos = n_pos;
    summary.n_neg = static_cast<int>(data.n()) - n_pos;
    const double a = summary.auc;
    const double q1 = a / (2.0 - a);
    const double q2 = 2.0 * a * a / (1.0 + a);
    const double var = (a * (1.0 - a) + (summary.n_pos - 1.0) * (q1 - a * a) +
                        (summary.n_neg - 1.0) * (q2 - a * a)) /
                       (static_cast<double>(summary.n_pos) * summary.n_neg);
    if (var > 0.0) return hm_lower(summary, level);
    return 0.0;
}

} // namespace detail

CalibrationResult bt_lower_bound(const EvaluationTable& data, MeasureKind kind,
                                 std::size_t model, const BootstrapEnsemble& ensemble,
                                 double alpha, const TiltOptions& options) {
    data.validate(kind);
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
    if (model >= data.m()) throw std::invalid_argument("model index out of range");
    if (!ensemble.plan || ensemble.plan->n != static_cast<int>(data.n()) ||
        ensemble.m != static_cast<int>(data.m()))
        throw std::invalid_argument("ensemble does not match the evaluation table");

    const auto z = influence_scores(kind, data.labels, data.column(model));

    if (is_degenerate(z)) {
        CalibrationResult result;
        result.fallback_used = true;
        result.achieved_level = alpha;
        result.lower_bound = detail::degenerate_fallback_bound(data, kind, model, z, alpha);
        return result;
    }

    const auto family = make_tilting_family(z, options.centered);
    const double theta_hat = ensemble.plugin[model];
    const int n = ensemble.plan->n;
    const int B = ensemble.B;

    const auto s = detail::tilt_dot_products(*ensemble.plan, family.z);
    std::vector<int> geq;
    geq.reserve(B);
    for (int b = 0; b < B; ++b)
        if (ensemble.value(b, static_cast<int>(model)) >= theta_hat) geq.push_back(b);

    const auto level = [&](double tau) {
        const double lme = detail::log_mean_exp(family.z, tau);
        double sum = 0.0;
        for (int b : geq) sum += std::exp(tau * s[b] - n * lme);
        return sum / static_cast<double>(B);
    };
    const auto margin = [&](double tau) { return alpha - level(tau); };

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
    result.lower_bound = std::clamp(tilted_statistic(data, kind, model, p), 0.0, theta_hat);
    return result;
}

} // namespace mabt
