#include "mabt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mabt {

namespace {

void check_lengths(std::size_t a, std::size_t b, std::size_t w) {
    if (a != b) throw std::invalid_argument("labels and predictions differ in length");
    if (a != w) throw std::invalid_argument("weights differ in length from the data");
}

void check_binary(int v, const char* what) {
    if (v != 0 && v != 1) throw std::invalid_argument(std::string(what) + " must be 0 or 1");
}

} // namespace

double weighted_accuracy(std::span<const int> labels, std::span<const int> preds,
                         const WeightVector& w) {
    check_lengths(labels.size(), preds.size(), w.size());
    double num = 0.0;
    double denom = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        check_binary(labels[i], "label");
        check_binary(preds[i], "prediction");
        denom += w[i];
        if (labels[i] == preds[i]) num += w[i];
    }
    return num / denom;
}

double weighted_accuracy(std::span<const int> labels, std::span<const double> preds,
                         const WeightVector& w) {
    check_lengths(labels.size(), preds.size(), w.size());
    double num = 0.0;
    double denom = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        check_binary(labels[i], "label");
        if (preds[i] != 0.0 && preds[i] != 1.0)
            throw std::invalid_argument("prediction must be 0 or 1");
        denom += w[i];
        if (static_cast<double>(labels[i]) == preds[i]) num += w[i];
    }
    return num / denom;
}

namespace detail {

std::vector<std::size_t> score_order(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    return order;
}

double weighted_auc_ordered(std::span<const int> labels, std::span<const double> scores,
                            std::span<const std::size_t> order, std::span<const double> w) {
    double num = 0.0;
    double cum_neg = 0.0; // weighted negative mass strictly below the current tie group
    double w_pos = 0.0;
    double w_neg = 0.0;

    std::size_t i = 0;
    const std::size_t n = order.size();
    while (i < n) {
        std::size_t j = i;
        double group_pos = 0.0;
        double group_neg = 0.0;
        const double s = scores[order[i]];
        while (j < n && scores[order[j]] == s) {
            if (labels[order[j]] == 1)
                group_pos += w[order[j]];
            else
                group_neg += w[order[j]];
            ++j;
        }
        num += group_pos * cum_neg + 0.5 * group_pos * group_neg;
        cum_neg += group_neg;
        w_pos += group_pos;
        w_neg += group_neg;
        i = j;
    }

    if (w_pos <= 0.0 || w_neg <= 0.0)
        throw std::invalid_argument("weighted AUC requires positive weight in both classes");
    return num / (w_pos * w_neg);
}

} // namespace detail

double weighted_auc(std::span<const int> labels, std::span<const double> scores,
                    const WeightVector& w) {
    check_lengths(labels.size(), scores.size(), w.size());
    for (int y : labels) check_binary(y, "label");
    const auto order = detail::score_order(scores);
    return detail::weighted_auc_ordered(labels, scores, order, w.values());
}

namespace {

// Classwise pair sums for the jackknife: psi row sums over positives and
// column sums over negatives, plus the total.
struct PairSums {
    double total = 0.0;
    std::vector<double> by_obs; // for positives: sum over negatives; for negatives: sum over positives
    int n_pos = 0;
    int n_neg = 0;
};

PairSums pair_sums(std::span<const int> labels, std::span<const double> scores) {
    PairSums out;
    out.by_obs.assign(labels.size(), 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        ++out.n_pos;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] != 0) continue;
            double psi = scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
            out.by_obs[i] += psi;
            out.by_obs[j] += psi;
            out.total += psi;
        }
    }
    out.n_neg = static_cast<int>(labels.size()) - out.n_pos;
    return out;
}

} // namespace

std::vector<double> influence_scores(MeasureKind kind, std::span<const int> labels,
                                     std::span<const double> preds) {
    if (labels.size() != preds.size())
        throw std::invalid_argument("labels and predictions differ in length");
    if (labels.size() < 2) throw std::invalid_argument("need at least 2 observations");
    const std::size_t n = labels.size();

    std::vector<double> z(n);
    if (kind == MeasureKind::Accuracy) {
        for (std::size_t i = 0; i < n; ++i) {
            check_binary(labels[i], "label");
            if (preds[i] != 0.0 && preds[i] != 1.0)
                throw std::invalid_argument("prediction must be 0 or 1");
            z[i] = (static_cast<double>(labels[i]) == preds[i]) ? 1.0 : 0.0;
        }
        return z;
    }

    const PairSums ps = pair_sums(labels, preds);
    if (ps.n_pos < 2 || ps.n_neg < 2)
        throw std::invalid_argument("AUC influence scores need at least 2 observations per class");

    const double np = ps.n_pos;
    const double nn = ps.n_neg;
    const double theta = ps.total / (np * nn);
    for (std::size_t i = 0; i < n; ++i) {
        double loo = labels[i] == 1 ? (ps.total - ps.by_obs[i]) / ((np - 1.0) * nn)
                                    : (ps.total - ps.by_obs[i]) / (np * (nn - 1.0));
        z[i] = static_cast<double>(n) * theta - static_cast<double>(n - 1) * loo;
    }
    return z;
}

double weighted_measure(const EvaluationTable& data, MeasureKind kind, std::size_t model,
                        const WeightVector& w) {
    const auto& col = data.column(model);
    if (kind == MeasureKind::Accuracy)
        return weighted_accuracy(data.labels, std::span<const double>(col), w);
    return weighted_auc(data.labels, col, w);
}

} // namespace mabt
