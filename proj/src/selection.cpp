#include "mabt/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mabt/measures.hpp"
#include "mabt/rng.hpp"

namespace mabt {

std::string to_string(const SelectionRule& rule) {
    switch (rule.kind) {
        case SelectionRule::Kind::SingleBest: return "single-best";
        case SelectionRule::Kind::WithinOneSe: return "within-1-se";
        case SelectionRule::Kind::TopFraction: {
            std::ostringstream os;
            os << "top-fraction=" << rule.fraction;
            return os.str();
        }
    }
    return "?";
}

SelectionRule rule_from_string(const std::string& text) {
    if (text == "single-best") return SelectionRule::single_best();
    if (text == "within-1-se") return SelectionRule::within_one_se();
    const std::string prefix = "top-fraction=";
    if (text.rfind(prefix, 0) == 0) {
        const double f = std::stod(text.substr(prefix.size()));
        if (!(f > 0.0 && f <= 1.0))
            throw std::invalid_argument("top-fraction must lie in (0, 1]");
        return SelectionRule::top_fraction(f);
    }
    throw std::invalid_argument("unknown selection rule '" + text +
                                "' (expected single-best, top-fraction=F or within-1-se)");
}

std::vector<std::vector<int>> kfold_indices(int n, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (k > n) throw std::invalid_argument("k must not exceed n");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 rng(derive_stream(seed, 0x6b666f6cULL));
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[i], order[j]);
    }

    // First n % k folds take the extra element.
    std::vector<std::vector<int>> folds(k);
    const int base = n / k;
    const int extra = n % k;
    int pos = 0;
    for (int f = 0; f < k; ++f) {
        const int size = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + pos, order.begin() + pos + size);
        pos += size;
    }
    return folds;
}

namespace {

double fold_performance(const std::vector<Predictor>& models, std::size_t candidate,
                        const Dataset& holdout, MeasureKind kind) {
    const auto& model = models[candidate];
    const std::size_t n = holdout.size();
    const auto w = WeightVector::uniform(n);
    if (kind == MeasureKind::Accuracy) {
        std::vector<int> preds(n);
        for (std::size_t i = 0; i < n; ++i) preds[i] = model.label(holdout.x.row(i));
        return weighted_accuracy(holdout.y, preds, w);
    }
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = model.score(holdout.x.row(i));
    return weighted_auc(holdout.y, scores, w);
}

Dataset subset(const Dataset& data, std::span<const int> rows) {
    Dataset out;
    out.x = Matrix(rows.size(), data.x.cols);
    out.y.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto src = data.x.row(static_cast<std::size_t>(rows[r]));
        std::copy(src.begin(), src.end(), out.x.values.begin() + r * data.x.cols);
        out.y[r] = data.y[static_cast<std::size_t>(rows[r])];
    }
    return out;
}

} // namespace

ValidationScores cv_performance(const Dataset& learning, const GridTrainer& trainer,
                                MeasureKind kind, int k, std::uint64_t seed) {
    learning.check();
    if (k < 2) throw std::invalid_argument("cross-validation needs k >= 2");
    const int n = static_cast<int>(learning.size());
    const auto folds = kfold_indices(n, k, seed);

    std::vector<std::vector<double>> fold_scores; // k x r
    std::size_t r = 0;
    for (int f = 0; f < k; ++f) {
        std::vector<int> train_rows;
        train_rows.reserve(n - folds[f].size());
        for (int g = 0; g < k; ++g)
            if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());

        try {
            const Dataset train = subset(learning, train_rows);
            const Dataset heldout = subset(learning, folds[f]);
            const auto models = trainer(train.x, train.y);
            if (f == 0)
                r = models.size();
            else if (models.size() != r)
                throw std::runtime_error("trainer returned a different grid size");
            std::vector<double> scores(r);
            for (std::size_t c = 0; c < r; ++c)
                scores[c] = fold_performance(models, c, heldout, kind);
            fold_scores.push_back(std::move(scores));
        } catch (const std::exception& ex) {
            throw std::runtime_error("fold " + std::to_string(f) + ": " + ex.what());
        }
    }

    ValidationScores out;
    out.source = ValidationSource::Cv;
    out.eta.assign(r, 0.0);
    std::vector<double> se(r, 0.0);
    for (std::size_t c = 0; c < r; ++c) {
        double mean = 0.0;
        for (int f = 0; f < k; ++f) mean += fold_scores[f][c];
        mean /= k;
        double ss = 0.0;
        for (int f = 0; f < k; ++f) {
            const double d = fold_scores[f][c] - mean;
            ss += d * d;
        }
        out.eta[c] = mean;
        se[c] = std::sqrt(ss / (k - 1.0)) / std::sqrt(static_cast<double>(k));
    }
    out.se = std::move(se);
    return out;
}

ValidationScores holdout_scores(const std::vector<Predictor>& models,
                                const Dataset& validation, MeasureKind kind) {
    validation.check();
    ValidationScores out;
    out.source = ValidationSource::Holdout;
    out.eta.resize(models.size());
    for (std::size_t c = 0; c < models.size(); ++c)
        out.eta[c] = fold_performance(models, c, validation, kind);
    return out;
}

SelectionOutcome preselect(const ValidationScores& scores, const SelectionRule& rule) {
    const std::size_t r = scores.eta.size();
    if (r == 0) throw std::invalid_argument("no candidates to preselect from");
    if (rule.kind == SelectionRule::Kind::WithinOneSe &&
        (scores.source != ValidationSource::Cv || !scores.se))
        throw std::invalid_argument("within-1-se preselection requires cross-validation scores");

    // Candidates by descending score; ties keep the smaller grid index first.
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores.eta[a] > scores.eta[b];
    });

    SelectionOutcome out;
    out.rule = rule;
    switch (rule.kind) {
        case SelectionRule::Kind::SingleBest:
            out.preselected = {order[0]};
            break;
        case SelectionRule::Kind::TopFraction: {
            if (!(rule.fraction > 0.0 && rule.fraction <= 1.0))
                throw std::invalid_argument("top-fraction must lie in (0, 1]");
            const auto keep = static_cast<std::size_t>(
                std::ceil(rule.fraction * static_cast<double>(r)));
            out.preselected.assign(order.begin(),
                                   order.begin() + std::min(keep, r));
            break;
        }
        case SelectionRule::Kind::WithinOneSe: {
            const std::size_t best = order[0];
            const double threshold = scores.eta[best] - (*scores.se)[best];
            for (std::size_t idx : order)
                if (scores.eta[idx] >= threshold) out.preselected.push_back(idx);
            break;
        }
    }
    return out;
}

std::size_t final_select(std::span<const double> theta_hat) {
    if (theta_hat.empty()) throw std::invalid_argument("no evaluation estimates given");
    std::size_t best = 0;
    for (std::size_t j = 1; j < theta_hat.size(); ++j)
        if (theta_hat[j] > theta_hat[best]) best = j;
    return best;
}

} // namespace mabt
