#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mabt/baselines.hpp"
#include "mabt/measures.hpp"
#include "mabt/resample.hpp"
#include "mabt/rng.hpp"
#include "mabt/tilting.hpp"

using namespace mabt;

namespace {

// Every ordered draw of n indices, collapsed to count rows: the multinomial
// distribution placed on the plan exactly (each multiset appears with its
// exact multiplicity out of n^n rows).
ResamplePlan enumeration_plan(int n) {
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= n;
    std::vector<std::uint32_t> counts;
    counts.reserve(static_cast<std::size_t>(total) * n);
    for (long long code = 0; code < total; ++code) {
        std::vector<std::uint32_t> row(n, 0);
        long long rem = code;
        for (int pos = 0; pos < n; ++pos) {
            ++row[rem % n];
            rem /= n;
        }
        counts.insert(counts.end(), row.begin(), row.end());
    }
    return ResamplePlan::from_counts(n, std::move(counts));
}

// Independent softmax for the oracle computations.
std::vector<double> oracle_weights(const std::vector<double>& z, double tau) {
    std::vector<double> p(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        p[i] = std::exp(tau * z[i]);
        sum += p[i];
    }
    for (auto& v : p) v /= sum;
    return p;
}

} // namespace

TEST_CASE("tilt_weights: identity, ratio and degenerate cases") {
    const auto family = make_tilting_family({1.0, 0.0});
    const auto at_zero = tilt_weights(family, 0.0);
    CHECK(at_zero[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(at_zero[1] == doctest::Approx(0.5).epsilon(1e-15));

    const auto at_ln2 = tilt_weights(family, std::log(2.0));
    CHECK(at_ln2[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(at_ln2[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(make_tilting_family({1.0, 1.0, 1.0}), DegenerateTilt);
}

TEST_CASE("tilt_weights: sums to one with strictly positive entries") {
    SplitMix64 rng(8);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 3 + static_cast<int>(rng.uniform_below(40));
        std::vector<double> z(n);
        for (auto& v : z) v = rng.uniform() * 3.0 - 1.0;
        const auto family = make_tilting_family(z);
        for (double tau : {-8.0, -2.0, -0.3, 0.0, 0.3, 2.0, 8.0}) {
            const auto p = tilt_weights(family, tau);
            double sum = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                REQUIRE(p[i] > 0.0);
                sum += p[i];
            }
            REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("log_importance_weight: spec examples") {
    const WeightVector uniform = WeightVector::uniform(2);
    const std::vector<std::uint32_t> c20{2, 0}, c02{0, 2};
    CHECK(log_importance_weight(c20, uniform, 2) == doctest::Approx(0.0).epsilon(1e-14));

    const WeightVector p({2.0 / 3.0, 1.0 / 3.0});
    CHECK(std::exp(log_importance_weight(c20, p, 2)) ==
          doctest::Approx(16.0 / 9.0).epsilon(1e-12));
    CHECK(std::exp(log_importance_weight(c02, p, 2)) ==
          doctest::Approx(4.0 / 9.0).epsilon(1e-12));

    const WeightVector zero({1.0, 0.0});
    CHECK(log_importance_weight(c02, zero, 2) == -INFINITY);
    CHECK_THROWS_AS(log_importance_weight(std::vector<std::uint32_t>{1, 0}, p, 2),
                    std::invalid_argument);
}

TEST_CASE("log_importance_weight: W_b(0) = 1 for every resample") {
    const auto plan = draw_resamples(12, 200, 5);
    const auto p = WeightVector::uniform(12);
    for (int b = 0; b < plan.B; ++b)
        REQUIRE(log_importance_weight(plan.row(b), p, 12) ==
                doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("log_importance_weight agrees with the dot-product identity") {
    SplitMix64 rng(14);
    const int n = 15;
    std::vector<double> z(n);
    for (auto& v : z) v = rng.uniform() * 2.0;
    const auto family = make_tilting_family(z);
    const auto plan = draw_resamples(n, 100, 3);
    const auto s = detail::tilt_dot_products(plan, z);
    for (double tau : {-1.5, -0.4, 0.6}) {
        const auto p = tilt_weights(family, tau);
        const double lme = detail::log_mean_exp(z, tau);
        for (int b = 0; b < plan.B; ++b) {
            const double direct = log_importance_weight(plan.row(b), p, n);
            REQUIRE(direct == doctest::Approx(tau * s[b] - n * lme).epsilon(1e-9));
        }
    }
}

TEST_CASE("tilted_ecdf: plain ECDF at tau = 0") {
    const std::vector<double> theta{0.5, 0.7, 0.9};
    const std::vector<double> logw(3, 0.0);
    CHECK(tilted_ecdf(theta, logw, 0.7) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(tilted_ecdf(theta, logw, 0.4) == 0.0);
}

TEST_CASE("tilted_ecdf: exhaustive enumeration matches the exact tilted mass (n = 3)") {
    // Accuracy data with correctness (1, 1, 0).
    EvaluationTable t;
    t.labels = {1, 0, 1};
    t.model_ids = {"m"};
    t.predictions = {{1, 0, 0}};
    const std::vector<double> z{1.0, 1.0, 0.0};

    const auto plan = enumeration_plan(3);
    const auto ens = bootstrap_performance(t, MeasureKind::Accuracy, plan);
    const auto col = ens.model_column(0);
    const auto family = make_tilting_family(std::vector<double>(z));

    for (double tau : {-2.0, -1.0, -0.3, 0.0, 0.4}) {
        const auto p = tilt_weights(family, tau);
        std::vector<double> logw(plan.B);
        for (int b = 0; b < plan.B; ++b)
            logw[b] = log_importance_weight(plan.row(b), p, 3);

        // Oracle: exact probability mass below x under the tilted
        // distribution, from first principles. The number of correct draws
        // is Binomial(3, q) with q the tilted mass on the two correct
        // observations.
        const auto pw = oracle_weights(z, tau);
        const double q = pw[0] + pw[1];
        auto binom3 = [&](int k) {
            const double choose = k == 0 || k == 3 ? 1.0 : 3.0;
            return choose * std::pow(q, k) * std::pow(1.0 - q, 3 - k);
        };
        for (double x : {-0.1, 0.0, 0.34, 0.67, 1.0}) {
            double exact = 0.0;
            for (int k = 0; k <= 3; ++k)
                if (k / 3.0 <= x) exact += binom3(k);
            REQUIRE(tilted_ecdf(col, logw, x) == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("tilted_statistic: spec examples") {
    EvaluationTable t;
    t.labels = {1, 1, 0};
    t.model_ids = {"m"};
    t.predictions = {{1, 1, 1}}; // correct = (1,1,0)
    CHECK(tilted_statistic(t, MeasureKind::Accuracy, 0, WeightVector({0.0, 0.0, 1.0})) == 0.0);
    CHECK(tilted_statistic(t, MeasureKind::Accuracy, 0, WeightVector::uniform(3)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    EvaluationTable t2;
    t2.labels = {1, 0};
    t2.model_ids = {"m"};
    t2.predictions = {{1, 1}}; // correct = (1,0)
    CHECK(tilted_statistic(t2, MeasureKind::Accuracy, 0, WeightVector({0.8, 0.2})) ==
          doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("tilted accuracy statistic is nondecreasing in tau") {
    EvaluationTable t;
    t.labels = {1, 1, 1, 1, 0, 0, 1, 1, 1, 1};
    t.model_ids = {"m"};
    t.predictions = {{1, 1, 1, 0, 0, 1, 1, 1, 0, 1}};
    const auto z = influence_scores(MeasureKind::Accuracy, t.labels, t.predictions[0]);
    const auto family = make_tilting_family(std::vector<double>(z));
    double prev = -1.0;
    for (double tau = -4.0; tau <= 4.0; tau += 0.25) {
        const double stat = tilted_statistic(t, MeasureKind::Accuracy, 0, tilt_weights(family, tau));
        REQUIRE(stat >= prev - 1e-12);
        prev = stat;
    }
}

TEST_CASE("bt calibration matches the exact root under exhaustive enumeration (n = 3)") {
    EvaluationTable t;
    t.labels = {1, 0, 1};
    t.model_ids = {"m"};
    t.predictions = {{1, 0, 0}}; // correct = (1,1,0), theta_hat = 2/3
    const auto plan = enumeration_plan(3);
    const auto ens = bootstrap_performance(t, MeasureKind::Accuracy, plan);

    const double alpha = 0.2;
    const auto result = bt_lower_bound(t, MeasureKind::Accuracy, 0, ens, alpha);
    CHECK_FALSE(result.fallback_used);
    CHECK(result.tau < 0.0);
    CHECK(result.achieved_level <= alpha + 1e-12);

    // Oracle: the exceedance probability under the tilted distribution is
    // P(Bin(3, q(tau)) >= 2); solve for the exact tau by fine bisection.
    auto exact_level = [](double tau) {
        const auto pw = oracle_weights({1.0, 1.0, 0.0}, tau);
        const double q = pw[0] + pw[1];
        return 3.0 * q * q * (1.0 - q) + q * q * q;
    };
    double lo = -20.0, hi = 0.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (exact_level(mid) <= alpha)
            lo = mid;
        else
            hi = mid;
    }
    CHECK(std::abs(result.tau - lo) <= 0.05);

    // The bound is the tilted statistic at the calibrated weights.
    const auto family = make_tilting_family({1.0, 1.0, 0.0});
    CHECK(result.lower_bound ==
          doctest::Approx(tilted_statistic(t, MeasureKind::Accuracy, 0,
                                           tilt_weights(family, result.tau)))
              .epsilon(1e-12));
}

TEST_CASE("bt bound: degenerate fallback and basic properties") {
    // All predictions correct at n = 20: Clopper-Pearson at x = n.
    EvaluationTable t;
    const int n = 20;
    t.labels.assign(n, 1);
    t.model_ids = {"m"};
    t.predictions = {std::vector<double>(n, 1.0)};
    const auto plan = draw_resamples(n, 500, 3);
    const auto ens = bootstrap_performance(t, MeasureKind::Accuracy, plan);

    const auto r05 = bt_lower_bound(t, MeasureKind::Accuracy, 0, ens, 0.05);
    CHECK(r05.fallback_used);
    CHECK(r05.lower_bound == doctest::Approx(std::pow(0.05, 1.0 / 20)).epsilon(1e-8));

    const auto r20 = bt_lower_bound(t, MeasureKind::Accuracy, 0, ens, 0.2);
    CHECK(r20.lower_bound >= r05.lower_bound);
}

TEST_CASE("bt bound: sanity band against the classical baselines") {
    // 24 of 30 correct.
    EvaluationTable t;
    const int n = 30;
    t.labels.assign(n, 1);
    t.model_ids = {"m"};
    std::vector<double> preds(n, 1.0);
    for (int i = 0; i < 6; ++i) preds[i * 5] = 0.0;
    t.predictions = {preds};

    const auto plan = draw_resamples(n, 10000, 99);
    const auto ens = bootstrap_performance(t, MeasureKind::Accuracy, plan);
    const auto result = bt_lower_bound(t, MeasureKind::Accuracy, 0, ens, 0.05);

    // Sanity band spanned by the classical baselines (CP sits below Wald at
    // these counts).
    const double wald = wald_lower({24, 30}, 0.05);
    const double cp = cp_lower({24, 30}, 0.05);
    CHECK_FALSE(result.fallback_used);
    CHECK(result.lower_bound >= std::min(wald, cp) - 0.03);
    CHECK(result.lower_bound <= std::max(wald, cp) + 0.03);
    CHECK(result.lower_bound <= ens.plugin[0]);

    // Monotone in alpha on the same ensemble.
    const auto r10 = bt_lower_bound(t, MeasureKind::Accuracy, 0, ens, 0.10);
    CHECK(r10.lower_bound >= result.lower_bound - 1e-12);

    // Invariant to centering the influence scores.
    TiltOptions centered;
    centered.centered = true;
    const auto rc = bt_lower_bound(t, MeasureKind::Accuracy, 0, ens, 0.05, centered);
    CHECK(rc.lower_bound == doctest::Approx(result.lower_bound).epsilon(1e-9));
}

TEST_CASE("importance weight normalization: sample mean of W stays near 1") {
    // Accuracy influence scores, 16 of 20 correct, B = 10000.
    EvaluationTable t;
    const int n = 20;
    t.labels.assign(n, 1);
    std::vector<double> preds(n, 1.0);
    for (int i = 0; i < 4; ++i) preds[i] = 0.0;
    t.model_ids = {"m"};
    t.predictions = {preds};
    const auto z = influence_scores(MeasureKind::Accuracy, t.labels, t.predictions[0]);
    const auto plan = draw_resamples(n, 10000, 123);
    const auto s = detail::tilt_dot_products(plan, z);

    for (double tau : {-0.5, -0.25, 0.25, 0.5}) {
        const double lme = detail::log_mean_exp(z, tau);
        double mass = 0.0;
        for (int b = 0; b < plan.B; ++b) mass += std::exp(tau * s[b] - n * lme);
        mass /= plan.B;
        REQUIRE(mass >= 0.8);
        REQUIRE(mass <= 1.2);
    }

    // A tighter influence spread keeps the check valid out to |tau| = 2.
    SplitMix64 rng(6);
    std::vector<double> z2(50);
    for (auto& v : z2) v = 0.5 + 0.05 * (2.0 * rng.uniform() - 1.0);
    const auto plan2 = draw_resamples(50, 10000, 321);
    const auto s2 = detail::tilt_dot_products(plan2, z2);
    for (double tau : {-2.0, -1.0, 1.0, 2.0}) {
        const double lme = detail::log_mean_exp(z2, tau);
        double mass = 0.0;
        for (int b = 0; b < plan2.B; ++b) mass += std::exp(tau * s2[b] - 50 * lme);
        mass /= plan2.B;
        REQUIRE(mass >= 0.8);
        REQUIRE(mass <= 1.2);
    }
}

TEST_CASE("bt bound: AUC degenerate fallback") {
    // Perfect separation: constant influence scores, HM variance 0, bound 0.
    EvaluationTable t;
    t.labels = {1, 1, 1, 0, 0, 0};
    t.model_ids = {"m"};
    t.predictions = {{0.9, 0.8, 0.7, 0.3, 0.2, 0.1}};
    const auto plan = draw_resamples(6, 200, 1);
    const auto ens = bootstrap_performance(t, MeasureKind::Auc, plan);
    const auto result = bt_lower_bound(t, MeasureKind::Auc, 0, ens, 0.05);
    CHECK(result.fallback_used);
    CHECK(result.lower_bound == 0.0);

    // All scores equal: degenerate with AUC 1/2, HM variance positive.
    EvaluationTable t2 = t;
    t2.predictions = {{0.5, 0.5, 0.5, 0.5, 0.5, 0.5}};
    const auto ens2 = bootstrap_performance(t2, MeasureKind::Auc, plan);
    const auto r2 = bt_lower_bound(t2, MeasureKind::Auc, 0, ens2, 0.05);
    CHECK(r2.fallback_used);
    CHECK(r2.lower_bound > 0.0);
    CHECK(r2.lower_bound < 0.5);
}

TEST_CASE("bt bound: genuine bracket failure carries diagnostics") {
    // Tiny AUC set: single-observation resamples tie at the plug-in value
    // and their importance weight explodes under negative tilts, so the
    // exceedance level never falls to alpha.
    EvaluationTable t;
    t.labels = {1, 1, 0, 0};
    t.model_ids = {"s"};
    t.predictions = {{0.9, 0.1, 0.6, 0.2}};
    const auto plan = draw_resamples(4, 400, 2);
    const auto ens = bootstrap_performance(t, MeasureKind::Auc, plan);
    try {
        bt_lower_bound(t, MeasureKind::Auc, 0, ens, 0.05);
        FAIL("expected CalibrationFailure");
    } catch (const CalibrationFailure& ex) {
        const std::string what = ex.what();
        CHECK(what.find("tau") != std::string::npos);
        CHECK(what.find("margin") != std::string::npos);
    }
}

TEST_CASE("bt bound: alpha precondition") {
    EvaluationTable t;
    t.labels = {1, 0, 1, 0};
    t.model_ids = {"m"};
    t.predictions = {{1, 0, 0, 0}};
    const auto plan = draw_resamples(4, 200, 2);
    const auto ens = bootstrap_performance(t, MeasureKind::Accuracy, plan);
    CHECK_THROWS_AS(bt_lower_bound(t, MeasureKind::Accuracy, 0, ens, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(bt_lower_bound(t, MeasureKind::Accuracy, 0, ens, 0.0),
                    std::invalid_argument);
}
