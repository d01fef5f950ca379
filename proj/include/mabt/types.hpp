// Shared domain types: evaluation data, weights, measure selection, errors.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mabt {

enum class MeasureKind {
    Accuracy, // predictions are class labels in {0,1}
    Auc       // predictions are real-valued scores
};

std::string to_string(MeasureKind kind);
MeasureKind measure_from_string(const std::string& name);

// Thrown when the influence scores are constant and the empirical
// distribution cannot be tilted.
struct DegenerateTilt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when no tilting parameter in the search bracket satisfies the
// calibration condition. The message carries bracket diagnostics.
struct CalibrationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Nonnegative weights over n observations, normalized to sum to one.
// Inputs whose sum deviates from 1 by more than `sum_tolerance` are
// rejected; smaller residue (root-finder rounding) is renormalized away.
class WeightVector {
public:
    static constexpr double sum_tolerance = 1e-12;

    explicit WeightVector(std::vector<double> weights);
    static WeightVector uniform(std::size_t n);

    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    std::span<const double> values() const { return w_; }

private:
    std::vector<double> w_;
};

// True labels plus one prediction column per model on the evaluation set.
// Predictions are stored column-major: predictions[j][i] is the prediction
// of model j for observation i.
struct EvaluationTable {
    std::vector<int> labels;
    std::vector<std::string> model_ids;
    std::vector<std::vector<double>> predictions;

    std::size_t n() const { return labels.size(); }
    std::size_t m() const { return model_ids.size(); }

    const std::vector<double>& column(std::size_t j) const { return predictions.at(j); }

    // Enforces the structural invariants for the given measure: n >= 2,
    // m >= 1, binary labels, matching column lengths, distinct model ids,
    // {0,1} predictions in accuracy mode and both classes in AUC mode.
    void validate(MeasureKind kind) const;
};

} // namespace mabt
