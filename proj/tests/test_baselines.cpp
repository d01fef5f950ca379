#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mabt/baselines.hpp"
#include "mabt/measures.hpp"
#include "mabt/rng.hpp"

using namespace mabt;

namespace {

constexpr double kZ95 = 1.6448536269514722; // standard normal 0.95 quantile

// Exact upper-tail binomial sum P(Bin(n, p) >= x), the defining quantity of
// the Clopper-Pearson lower bound.
double binom_tail_geq(int n, double p, int x) {
    if (x <= 0) return 1.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double tail = 0.0;
    for (int k = x; k <= n; ++k) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                std::lgamma(n - k + 1.0) + k * std::log(p) +
                                (n - k) * std::log1p(-p);
        tail += std::exp(log_term);
    }
    return tail;
}

// Independent route to the CP lower bound: bisection on the binomial sum.
double cp_lower_by_binomial(int n, int x, double alpha) {
    if (x == 0) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (binom_tail_geq(n, mid, x) <= alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("normal quantile: reference values") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-8));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-8));
    CHECK(normal_quantile(0.01) == doctest::Approx(-2.3263478740408408).epsilon(1e-8));
    CHECK(normal_quantile(1e-6) == doctest::Approx(-4.753424308822899).epsilon(1e-7));
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
}

TEST_CASE("sidak adjustment") {
    CHECK(sidak_adjust(0.05, 1) == doctest::Approx(0.05).epsilon(1e-14));
    // Data-example levels: m = 12 -> 0.0043, m = 22 -> 0.0023 at 4 decimals.
    CHECK(std::round(sidak_adjust(0.05, 12) * 1e4) / 1e4 == doctest::Approx(0.0043));
    CHECK(std::round(sidak_adjust(0.05, 22) * 1e4) / 1e4 == doctest::Approx(0.0023));
    CHECK(std::round(sidak_adjust(0.05, 6) * 1e4) / 1e4 == doctest::Approx(0.0085));
    CHECK_THROWS_AS(sidak_adjust(0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(sidak_adjust(0.05, 0), std::invalid_argument);
}

TEST_CASE("Wald lower bound") {
    // Data example: 168/175 correct -> 93.6 at one decimal (as a percentage).
    const double v = wald_lower({168, 175}, 0.05);
    CHECK(std::round(v * 1e3) / 1e3 == doctest::Approx(0.936));
    CHECK(v == doctest::Approx(0.9356).epsilon(5e-4));

    CHECK(wald_lower({20, 20}, 0.05) == 1.0); // zero variance
    CHECK(wald_lower({50, 100}, 0.05) ==
          doctest::Approx(0.5 - kZ95 * 0.05).epsilon(1e-8)); // direct formula evaluation
}

TEST_CASE("Wilson lower bound") {
    const double v = wilson_lower({168, 175}, 0.05);
    CHECK(std::round(v * 1e3) / 1e3 == doctest::Approx(0.928));
    CHECK(v == doctest::Approx(0.9278).epsilon(5e-4));

    CHECK(wilson_lower({0, 20}, 0.05) == 0.0);
    // x = n: the score equation collapses to the hand-solved quadratic root
    // n / (n + z^2).
    CHECK(wilson_lower({20, 20}, 0.05) ==
          doctest::Approx(20.0 / (20.0 + kZ95 * kZ95)).epsilon(1e-9));
}

TEST_CASE("Clopper-Pearson lower bound") {
    CHECK(cp_lower({0, 20}, 0.05) == 0.0);
    CHECK(cp_lower({20, 20}, 0.05) == doctest::Approx(std::pow(0.05, 1.0 / 20)).epsilon(1e-8));
    const double v = cp_lower({168, 175}, 0.05);
    CHECK(std::round(v * 1e3) / 1e3 == doctest::Approx(0.926));
}

TEST_CASE("Clopper-Pearson: binomial-sum characterization, all n <= 30") {
    for (int n = 1; n <= 30; ++n) {
        for (int x = 0; x <= n; ++x) {
            for (double alpha : {0.01, 0.05, 0.2}) {
                const double via_beta = cp_lower({x, n}, alpha);
                const double via_binom = cp_lower_by_binomial(n, x, alpha);
                REQUIRE(std::abs(via_beta - via_binom) <= 1e-8);
                if (x > 0) REQUIRE(binom_tail_geq(n, via_beta, x) <= alpha + 1e-9);
            }
        }
    }
}

TEST_CASE("binomial bounds: range and monotonicity, exhaustive n <= 30") {
    for (int n = 1; n <= 30; ++n) {
        for (double alpha : {0.01, 0.05, 0.1}) {
            double prev_wald = -1.0, prev_wilson = -1.0, prev_cp = -1.0;
            for (int x = 0; x <= n; ++x) {
                const BinomialSummary s{x, n};
                const double w = wald_lower(s, alpha);
                const double wi = wilson_lower(s, alpha);
                const double cp = cp_lower(s, alpha);
                const double p_hat = double(x) / n;
                for (double v : {w, wi, cp}) {
                    REQUIRE(v >= 0.0);
                    REQUIRE(v <= p_hat + 1e-12);
                }
                REQUIRE(w >= prev_wald - 1e-12);
                REQUIRE(wi >= prev_wilson - 1e-12);
                REQUIRE(cp >= prev_cp - 1e-12);
                prev_wald = w;
                prev_wilson = wi;
                prev_cp = cp;
                // Nondecreasing in alpha.
                REQUIRE(wald_lower(s, alpha) <= wald_lower(s, alpha * 2) + 1e-12);
                REQUIRE(wilson_lower(s, alpha) <= wilson_lower(s, alpha * 2) + 1e-12);
                REQUIRE(cp_lower(s, alpha) <= cp_lower(s, alpha * 2) + 1e-12);
            }
        }
    }
}

TEST_CASE("DeLong components: worked example") {
    const std::vector<int> labels{1, 1, 0, 0};
    const std::vector<double> scores{0.9, 0.4, 0.6, 0.1};
    const auto s = delong_components(labels, scores);
    CHECK(s.auc == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(s.variance == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(s.n_pos == 2);
    CHECK(s.n_neg == 2);

    CHECK(delong_lower(s, 0.05) ==
          doctest::Approx(0.75 - kZ95 * std::sqrt(0.125)).epsilon(1e-9));
    CHECK(delong_lower(s, 0.4999) == doctest::Approx(0.75).epsilon(1e-3)); // z -> 0
}

TEST_CASE("DeLong components: edge cases") {
    const auto perfect =
        delong_components(std::vector<int>{1, 1, 0, 0}, std::vector<double>{4, 3, 2, 1});
    CHECK(perfect.auc == 1.0);
    CHECK(perfect.variance == 0.0);
    CHECK(delong_lower(perfect, 0.05) == 1.0);

    const auto flat =
        delong_components(std::vector<int>{1, 0, 1, 0}, std::vector<double>{1, 1, 1, 1});
    CHECK(flat.auc == 0.5);

    CHECK_THROWS_AS(delong_components(std::vector<int>{1, 1}, std::vector<double>{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("DeLong: AUC matches the weighted measure and the variance matches "
          "an explicit double-loop recomputation") {
    SplitMix64 rng(31337);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 5 + static_cast<int>(rng.uniform_below(16));
        std::vector<int> labels(n);
        std::vector<double> scores(n);
        int pos = 0;
        for (int i = 0; i < n; ++i) {
            labels[i] = i < 1 ? 1 : (i < 2 ? 0 : (rng.uniform() < 0.5 ? 1 : 0));
            pos += labels[i];
            scores[i] = std::round(rng.uniform() * 12) / 12.0;
        }
        const auto s = delong_components(labels, scores);
        CHECK(s.auc == doctest::Approx(weighted_auc(labels, scores, WeightVector::uniform(n)))
                           .epsilon(1e-14));

        // Structural components recomputed from scratch.
        std::vector<double> v10, v01;
        for (int i = 0; i < n; ++i) {
            if (labels[i] != 1) continue;
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                if (labels[j] == 0)
                    acc += scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
            v10.push_back(acc / (n - pos));
        }
        for (int j = 0; j < n; ++j) {
            if (labels[j] != 0) continue;
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                if (labels[i] == 1)
                    acc += scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
            v01.push_back(acc / pos);
        }
        auto var = [](const std::vector<double>& xs) {
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= xs.size();
            double ss = 0.0;
            for (double x : xs) ss += (x - mean) * (x - mean);
            return xs.size() > 1 ? ss / (xs.size() - 1.0) : 0.0;
        };
        const double want = var(v10) / v10.size() + var(v01) / v01.size();
        REQUIRE(std::abs(s.variance - want) <= 1e-12);
    }
}

TEST_CASE("Hanley-McNeil lower bound") {
    AucSummary s;
    s.auc = 0.9;
    s.n_pos = 10;
    s.n_neg = 10;
    // Direct evaluation of the HM variance formula.
    const double q1 = 0.9 / 1.1;
    const double q2 = 2 * 0.81 / 1.9;
    const double var = (0.09 + 9 * (q1 - 0.81) + 9 * (q2 - 0.81)) / 100.0;
    CHECK(var == doctest::Approx(0.005473).epsilon(1e-3));
    CHECK(hm_lower(s, 0.05) == doctest::Approx(0.9 - kZ95 * std::sqrt(var)).epsilon(1e-9));
    CHECK(std::round(hm_lower(s, 0.05) * 1e3) / 1e3 == doctest::Approx(0.778));

    s.auc = 1.0;
    CHECK(hm_lower(s, 0.05) == 1.0);

    s.auc = 0.5;
    s.n_pos = 1;
    s.n_neg = 1;
    CHECK(hm_lower(s, 0.05) == 0.0); // 0.5 - z * 0.5 clamped to 0
}
