#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mabt/measures.hpp"
#include "mabt/rng.hpp"

using namespace mabt;

namespace {

// Brute-force oracles: literal double loops over pairs, independent of the
// sweep implementation.
double brute_auc(const std::vector<int>& labels, const std::vector<double>& scores,
                 const std::vector<double>& w) {
    double num = 0.0, wp = 0.0, wn = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1)
            wp += w[i];
        else
            wn += w[i];
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] != 0) continue;
            if (scores[i] > scores[j])
                num += w[i] * w[j];
            else if (scores[i] == scores[j])
                num += 0.5 * w[i] * w[j];
        }
    }
    return num / (wp * wn);
}

std::vector<double> uniform_w(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

} // namespace

TEST_CASE("weighted accuracy: spec examples") {
    const std::vector<int> labels{1, 0, 1, 1};
    const std::vector<int> preds{1, 0, 0, 1};
    CHECK(weighted_accuracy(labels, preds, WeightVector::uniform(4)) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(weighted_accuracy(labels, preds, WeightVector({0.4, 0.2, 0.2, 0.2})) ==
          doctest::Approx(0.8).epsilon(1e-15));
    CHECK(weighted_accuracy(labels, labels, WeightVector({0.4, 0.2, 0.2, 0.2})) == 1.0);
}

TEST_CASE("weighted accuracy: error paths") {
    CHECK_THROWS_AS(weighted_accuracy(std::vector<int>{1, 0}, std::vector<int>{1},
                                      WeightVector::uniform(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_accuracy(std::vector<int>{1, 2}, std::vector<int>{1, 0},
                                      WeightVector::uniform(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({-0.5, 1.5}), std::invalid_argument);
}

TEST_CASE("weighted accuracy: uniform weights equal count/n, exhaustive n <= 8") {
    for (int n = 2; n <= 8; ++n) {
        const auto w = WeightVector::uniform(n);
        for (int lab = 0; lab < (1 << n); ++lab) {
            for (int pred = 0; pred < (1 << n); ++pred) {
                std::vector<int> labels(n), preds(n);
                int correct = 0;
                for (int i = 0; i < n; ++i) {
                    labels[i] = (lab >> i) & 1;
                    preds[i] = (pred >> i) & 1;
                    correct += labels[i] == preds[i];
                }
                const double got = weighted_accuracy(labels, preds, w);
                REQUIRE(got == doctest::Approx(double(correct) / n).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("weighted AUC: spec examples") {
    CHECK(weighted_auc(std::vector<int>{1, 1, 0, 0}, std::vector<double>{0.9, 0.8, 0.7, 0.1},
                       WeightVector::uniform(4)) == 1.0);
    CHECK(weighted_auc(std::vector<int>{1, 0}, std::vector<double>{0.5, 0.5},
                       WeightVector::uniform(2)) == 0.5);
    CHECK(weighted_auc(std::vector<int>{1, 0, 0}, std::vector<double>{0.6, 0.8, 0.2},
                       WeightVector({0.25, 0.25, 0.5})) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(weighted_auc(std::vector<int>{1, 1}, std::vector<double>{0.1, 0.2},
                                 WeightVector::uniform(2)),
                    std::invalid_argument);
}

TEST_CASE("weighted AUC: equals brute-force pair counting, exhaustive n <= 8") {
    const double alphabet[3] = {0.25, 0.5, 0.75};
    for (int n = 2; n <= 8; ++n) {
        long long combos = 1;
        for (int i = 0; i < n; ++i) combos *= 3;
        const auto w = uniform_w(n);
        const WeightVector wv(w);
        for (int lab = 0; lab < (1 << n); ++lab) {
            if (lab == 0 || lab == (1 << n) - 1) continue; // single class
            std::vector<int> labels(n);
            for (int i = 0; i < n; ++i) labels[i] = (lab >> i) & 1;
            for (long long sc = 0; sc < combos; ++sc) {
                std::vector<double> scores(n);
                long long rem = sc;
                for (int i = 0; i < n; ++i) {
                    scores[i] = alphabet[rem % 3];
                    rem /= 3;
                }
                const double got = weighted_auc(labels, scores, wv);
                const double want = brute_auc(labels, scores, w);
                REQUIRE(std::abs(got - want) <= 1e-15);
            }
        }
    }
}

TEST_CASE("weighted AUC: random nonuniform weights against the brute force") {
    SplitMix64 rng(20240811);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 3 + static_cast<int>(rng.uniform_below(10));
        std::vector<int> labels(n);
        std::vector<double> scores(n), w(n);
        double sum = 0.0;
        bool pos = false, neg = false;
        for (int i = 0; i < n; ++i) {
            labels[i] = rng.uniform() < 0.5 ? 1 : 0;
            pos = pos || labels[i] == 1;
            neg = neg || labels[i] == 0;
            scores[i] = std::round(rng.uniform() * 8) / 8.0; // ties likely
            w[i] = 0.1 + rng.uniform();
            sum += w[i];
        }
        if (!pos || !neg) continue;
        for (double& wi : w) wi /= sum;
        const double got = weighted_auc(labels, scores, WeightVector(w));
        CHECK(std::abs(got - brute_auc(labels, scores, w)) <= 1e-13);
    }
}

TEST_CASE("weighted AUC: invariant under strictly increasing score transforms") {
    SplitMix64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 6 + static_cast<int>(rng.uniform_below(8));
        std::vector<int> labels(n);
        std::vector<double> scores(n), mapped(n);
        for (int i = 0; i < n; ++i) {
            labels[i] = i % 2;
            scores[i] = std::round(rng.uniform() * 6) / 6.0;
            mapped[i] = std::exp(3.0 * scores[i]) + 1.0;
        }
        const auto w = WeightVector::uniform(n);
        CHECK(weighted_auc(labels, scores, w) == weighted_auc(labels, mapped, w));
    }
}

TEST_CASE("measures: invariant under joint permutation of observations and weights") {
    SplitMix64 rng(99);
    const int n = 11;
    std::vector<int> labels(n), preds(n), perm(n);
    std::vector<double> scores(n), w(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        labels[i] = i % 2;
        preds[i] = rng.uniform() < 0.7 ? labels[i] : 1 - labels[i];
        scores[i] = rng.uniform();
        w[i] = 0.2 + rng.uniform();
        sum += w[i];
        perm[i] = i;
    }
    for (double& wi : w) wi /= sum;
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.uniform_below(i + 1)]);

    std::vector<int> plab(n), ppred(n);
    std::vector<double> pscore(n), pw(n);
    for (int i = 0; i < n; ++i) {
        plab[i] = labels[perm[i]];
        ppred[i] = preds[perm[i]];
        pscore[i] = scores[perm[i]];
        pw[i] = w[perm[i]];
    }
    CHECK(weighted_accuracy(labels, preds, WeightVector(w)) ==
          doctest::Approx(weighted_accuracy(plab, ppred, WeightVector(pw))).epsilon(1e-14));
    CHECK(weighted_auc(labels, scores, WeightVector(w)) ==
          doctest::Approx(weighted_auc(plab, pscore, WeightVector(pw))).epsilon(1e-14));
}

TEST_CASE("influence scores: accuracy correctness indicators") {
    const auto z = influence_scores(MeasureKind::Accuracy, std::vector<int>{1, 0, 1},
                                    std::vector<double>{1, 0, 0});
    REQUIRE(z.size() == 3);
    CHECK(z[0] == 1.0);
    CHECK(z[1] == 1.0);
    CHECK(z[2] == 0.0);

    const auto mean = (z[0] + z[1] + z[2]) / 3.0;
    CHECK(mean == doctest::Approx(weighted_accuracy(std::vector<int>{1, 0, 1},
                                                    std::vector<int>{1, 0, 0},
                                                    WeightVector::uniform(3))));
}

TEST_CASE("influence scores: AUC jackknife pseudo-values against a brute-force oracle") {
    const std::vector<int> labels{1, 1, 0, 0};
    const std::vector<double> scores{0.9, 0.4, 0.6, 0.1};
    const auto z = influence_scores(MeasureKind::Auc, labels, scores);

    // Oracle: recompute every leave-one-out AUC by deleting the observation.
    const std::size_t n = labels.size();
    const double theta = brute_auc(labels, scores, uniform_w(n));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> lab;
        std::vector<double> sc;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            lab.push_back(labels[j]);
            sc.push_back(scores[j]);
        }
        const double loo = brute_auc(lab, sc, uniform_w(n - 1));
        CHECK(z[i] == doctest::Approx(n * theta - (n - 1) * loo).epsilon(1e-12));
    }
    CHECK(z[0] == doctest::Approx(1.5));
    CHECK(z[1] == doctest::Approx(0.0));
    CHECK(z[2] == doctest::Approx(0.0));
    CHECK(z[3] == doctest::Approx(1.5));
}

TEST_CASE("influence scores: AUC jackknife on random data") {
    SplitMix64 rng(4242);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 6 + static_cast<int>(rng.uniform_below(7));
        std::vector<int> labels(n);
        std::vector<double> scores(n);
        for (int i = 0; i < n; ++i) {
            labels[i] = i < 2 ? 1 : (i < 4 ? 0 : (rng.uniform() < 0.5 ? 1 : 0));
            scores[i] = rng.uniform();
        }
        const auto z = influence_scores(MeasureKind::Auc, labels, scores);
        const double theta = brute_auc(labels, scores, uniform_w(n));
        for (int i = 0; i < n; ++i) {
            std::vector<int> lab;
            std::vector<double> sc;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                lab.push_back(labels[j]);
                sc.push_back(scores[j]);
            }
            const double loo = brute_auc(lab, sc, uniform_w(n - 1));
            REQUIRE(z[i] == doctest::Approx(n * theta - (n - 1) * loo).epsilon(1e-12));
        }
    }
}

TEST_CASE("influence scores: degenerate and error cases") {
    // Perfect separation: all leave-one-out AUCs are 1, z constant.
    const auto z = influence_scores(MeasureKind::Auc, std::vector<int>{1, 1, 0, 0},
                                    std::vector<double>{0.9, 0.8, 0.2, 0.1});
    CHECK(z[0] == z[1]);
    CHECK(z[1] == z[2]);
    CHECK(z[2] == z[3]);

    CHECK_THROWS_AS(influence_scores(MeasureKind::Auc, std::vector<int>{1, 0, 0},
                                     std::vector<double>{0.9, 0.5, 0.1}),
                    std::invalid_argument); // fewer than 2 positives
}
