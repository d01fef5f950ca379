// Exponential tilting of the empirical distribution, importance-sampling
// reweighting of bootstrap resamples, and the plain (single-model)
// bootstrap-tilting lower confidence bound.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mabt/resample.hpp"
#include "mabt/types.hpp"

namespace mabt {

// One-parameter exponential family over the observed data, indexed by the
// tilting parameter tau through per-observation influence scores z.
struct TiltingFamily {
    std::vector<double> z;
    bool centered = false;
};

// Builds the family, optionally centering z (the induced weights are
// invariant to shifts of z, so this is cosmetic). Throws DegenerateTilt when
// z is constant, in which case the empirical distribution cannot be tilted.
TiltingFamily make_tilting_family(std::vector<double> z, bool centered = false);

bool is_degenerate(std::span<const double> z);

struct CalibrationResult {
    double tau = 0.0;           // calibrated tilting parameter; < 0 unless fallback_used
    double lower_bound = 0.0;   // in [0, 1]
    double achieved_level = 0.0;
    long long iterations = 0;   // level-function evaluations spent
    bool fallback_used = false;
};

// p_i(tau) = exp(tau z_i) / sum_k exp(tau z_k), computed with the max
// exponent subtracted.
WeightVector tilt_weights(const TiltingFamily& family, double tau);

// log W_b(tau) = sum_i counts_b[i] * log(n p_i). A zero weight hit by a
// positive count yields -infinity (the resample has weight zero).
double log_importance_weight(std::span<const std::uint32_t> counts_b, const WeightVector& p,
                             int n);

// Importance-sampling estimate of the tilted CDF at x:
// (1/B) sum_b exp(logw_b) I{theta_star_b <= x}. The raw estimate is
// returned unclamped; it can exceed 1 for extreme tau.
double tilted_ecdf(std::span<const double> theta_star_col, std::span<const double> logw,
                   double x);

// The performance measure evaluated under the tilted distribution, i.e. the
// p-weighted measure on the observed evaluation data.
double tilted_statistic(const EvaluationTable& data, MeasureKind kind, std::size_t model,
                        const WeightVector& p);

struct TiltOptions {
    bool centered = false;
    double tau_cap = 50.0;     // geometric bracket expansion stops at |tau| = cap
    double width_tol = 1e-6;   // bisection bracket width tolerance
};

// Single-model bootstrap-tilting lower confidence bound: the largest tau < 0
// whose estimated exceedance probability
//   (1/B) sum_b W_b(tau) I{theta*_b >= theta_hat}
// stays at or below alpha, evaluated at the tilted weights. Degenerate
// families fall back to Clopper-Pearson (accuracy) or a Hanley-McNeil bound
// when its variance is positive, else 0 (AUC).
CalibrationResult bt_lower_bound(const EvaluationTable& data, MeasureKind kind,
                                 std::size_t model, const BootstrapEnsemble& ensemble,
                                 double alpha, const TiltOptions& options = {});

namespace detail {

// log( (1/n) sum_i exp(tau z_i) ), stable in tau.
double log_mean_exp(std::span<const double> z, double tau);

// S_b = sum_i counts_b[i] * z_i for every plan row; together with
// log_mean_exp this gives log W_b(tau) = tau S_b - n log_mean_exp(z, tau).
std::vector<double> tilt_dot_products(const ResamplePlan& plan, std::span<const double> z);

struct CalibrateOutcome {
    double tau = 0.0;
    double margin = 0.0;
    long long iterations = 0;
};

struct CalibrateOptions {
    double width_tol = 1e-6;   // bisection bracket width tolerance
    double margin_tol = 0.0;   // stop when the margin gap falls below this
    double tau_cap = 50.0;     // expansion stops at |tau| = cap
    double expand_start = 1.0; // first probed |tau|
    double expand_ratio = 2.0; // geometric expansion factor
};

// Finds the largest tau < 0 with margin(tau) >= 0. The margin must be
// nonincreasing in tau up to Monte Carlo noise (conservative side towards
// -infinity). Expands geometrically from -expand_start until the condition
// holds, then bisects for the right edge of the feasible set. Non-finite
// margins count as infeasible. Throws CalibrationFailure when no probed tau
// satisfies the condition.
CalibrateOutcome calibrate_largest_tau(const std::function<double(double)>& margin,
                                       const CalibrateOptions& options);

// Shared fallback for degenerate tilting families at significance `level`.
double degenerate_fallback_bound(const EvaluationTable& data, MeasureKind kind,
                                 std::size_t model, std::span<const double> z, double level);

} // namespace detail

} // namespace mabt
