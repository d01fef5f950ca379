// Weighted performance measures for binary classification and their
// per-observation influence scores, the raw material for tilting.
#pragma once

#include <span>
#include <vector>

#include "mabt/types.hpp"

namespace mabt {

// Weighted prediction accuracy: sum_i w_i I{pred_i == label_i}, with the
// weight mass normalized inside the sum so that an all-correct column is
// exactly 1 for any valid weights.
double weighted_accuracy(std::span<const int> labels, std::span<const int> preds,
                         const WeightVector& w);

// Convenience overload for real-valued prediction columns holding 0/1.
double weighted_accuracy(std::span<const int> labels, std::span<const double> preds,
                         const WeightVector& w);

// Weighted AUC with the Mann-Whitney tie convention (ties count 1/2):
//   sum_{i in pos} sum_{j in neg} w_i w_j (I{s_i > s_j} + 0.5 I{s_i = s_j})
//     / (sum_{pos} w_i * sum_{neg} w_j).
// Both classes must carry positive total weight.
double weighted_auc(std::span<const int> labels, std::span<const double> scores,
                    const WeightVector& w);

// Influence scores z defining the tilting direction for one model column.
// Accuracy: correctness indicators. AUC: leave-one-out jackknife
// pseudo-values z_i = n*theta - (n-1)*theta_(-i) under uniform weights.
std::vector<double> influence_scores(MeasureKind kind, std::span<const int> labels,
                                     std::span<const double> preds);

// Dispatch to the measure selected by `kind` for one column of `data`.
double weighted_measure(const EvaluationTable& data, MeasureKind kind, std::size_t model,
                        const WeightVector& w);

namespace detail {

// Index order of `scores` ascending; the weighted AUC sweep below requires it.
std::vector<std::size_t> score_order(std::span<const double> scores);

// Single O(n) sweep over a precomputed score order. Shared by the public
// weighted_auc and the bootstrap loop so both produce bit-identical values.
double weighted_auc_ordered(std::span<const int> labels, std::span<const double> scores,
                            std::span<const std::size_t> order, std::span<const double> w);

} // namespace detail

} // namespace mabt
