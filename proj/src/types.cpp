#include "mabt/types.hpp"

#include <cmath>
#include <unordered_set>

namespace mabt {

std::string to_string(MeasureKind kind) {
    return kind == MeasureKind::Accuracy ? "accuracy" : "auc";
}

MeasureKind measure_from_string(const std::string& name) {
    if (name == "accuracy") return MeasureKind::Accuracy;
    if (name == "auc") return MeasureKind::Auc;
    throw std::invalid_argument("unknown measure '" + name + "' (expected accuracy or auc)");
}

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw std::invalid_argument("weight vector must be nonempty");
    double sum = 0.0;
    for (double w : w_) {
        if (!(w >= 0.0)) throw std::invalid_argument("weights must be nonnegative and finite");
        sum += w;
    }
    if (std::abs(sum - 1.0) > sum_tolerance)
        throw std::invalid_argument("weights must sum to 1 within 1e-12 (got " +
                                    std::to_string(sum) + ")");
    if (sum != 1.0) {
        for (double& w : w_) w /= sum;
    }
}

WeightVector WeightVector::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("weight vector must be nonempty");
    return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

void EvaluationTable::validate(MeasureKind kind) const {
    if (labels.size() < 2) throw std::invalid_argument("evaluation set needs at least 2 observations");
    if (model_ids.empty()) throw std::invalid_argument("at least one model column is required");
    if (predictions.size() != model_ids.size())
        throw std::invalid_argument("prediction column count does not match model id count");

    std::unordered_set<std::string> seen;
    for (const auto& id : model_ids) {
        if (!seen.insert(id).second)
            throw std::invalid_argument("duplicate model id '" + id + "'");
    }

    int n_pos = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0 or 1");
        n_pos += y;
    }
    if (kind == MeasureKind::Auc && (n_pos == 0 || n_pos == static_cast<int>(labels.size())))
        throw std::invalid_argument("AUC mode requires both classes in the labels");

    for (std::size_t j = 0; j < predictions.size(); ++j) {
        const auto& col = predictions[j];
        if (col.size() != labels.size())
            throw std::invalid_argument("prediction column '" + model_ids[j] +
                                        "' has wrong length");
        for (double v : col) {
            if (!std::isfinite(v))
                throw std::invalid_argument("prediction column '" + model_ids[j] +
                                            "' contains a non-finite value");
            if (kind == MeasureKind::Accuracy && v != 0.0 && v != 1.0)
                throw std::invalid_argument("accuracy mode requires predictions in {0,1}; column '" +
                                            model_ids[j] + "' violates this");
        }
    }
}

} // namespace mabt
