// Validation-stage performance estimation (hold-out or k-fold
// cross-validation) and the preselection / final-selection rules.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mabt/data.hpp"
#include "mabt/types.hpp"

namespace mabt {

enum class ValidationSource { Holdout, Cv };

struct ValidationScores {
    std::vector<double> eta;              // validation performance per candidate
    std::optional<std::vector<double>> se; // CV standard errors; present iff source == Cv
    ValidationSource source = ValidationSource::Holdout;
};

struct SelectionRule {
    enum class Kind { SingleBest, TopFraction, WithinOneSe };
    Kind kind = Kind::SingleBest;
    double fraction = 0.1; // TopFraction only

    static SelectionRule single_best() { return {Kind::SingleBest, 0.0}; }
    static SelectionRule top_fraction(double f) { return {Kind::TopFraction, f}; }
    static SelectionRule within_one_se() { return {Kind::WithinOneSe, 0.0}; }
};

std::string to_string(const SelectionRule& rule);
SelectionRule rule_from_string(const std::string& text);

struct SelectionOutcome {
    std::vector<std::size_t> preselected; // candidate indices, best validation score first
    SelectionRule rule;
    std::optional<std::size_t> final; // position within `preselected`
};

// Partitions {0..n-1} into k folds whose sizes differ by at most one,
// after a seeded shuffle.
std::vector<std::vector<int>> kfold_indices(int n, int k, std::uint64_t seed);

// A fitted candidate model: real-valued score and hard class label per row.
struct Predictor {
    std::function<double(std::span<const double>)> score;
    std::function<int(std::span<const double>)> label;
};

// Trains the full candidate grid on the given data.
using GridTrainer =
    std::function<std::vector<Predictor>(const Matrix& x, const std::vector<int>& y)>;

// Mean held-out-fold performance per candidate, plus the standard error of
// the k fold scores (sd / sqrt(k)).
ValidationScores cv_performance(const Dataset& learning, const GridTrainer& trainer,
                                MeasureKind kind, int k = 10, std::uint64_t seed = 0);

// Performance of already-fitted candidates on a held-out validation set.
ValidationScores holdout_scores(const std::vector<Predictor>& models,
                                const Dataset& validation, MeasureKind kind);

// SingleBest: argmax. TopFraction(f): the ceil(f*r) highest scores.
// WithinOneSe: all candidates within one CV standard error (of the best
// candidate) of the best score; requires CV scores.
SelectionOutcome preselect(const ValidationScores& scores, const SelectionRule& rule);

// Argmax of the evaluation estimates; ties go to the lowest preselection
// rank, i.e. the earliest position in the input sequence.
std::size_t final_select(std::span<const double> theta_hat);

} // namespace mabt
