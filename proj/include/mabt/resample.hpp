// Seeded bootstrap resampling of evaluation-set indices and the bootstrap
// performance ensemble computed from them.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mabt/types.hpp"

namespace mabt {

// B multinomial(n, uniform) count vectors. Row b is generated from a stream
// keyed by (seed, b), so any parallel schedule reproduces the same plan.
struct ResamplePlan {
    int n = 0;
    int B = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> counts; // B x n, row-major

    std::span<const std::uint32_t> row(int b) const {
        return {counts.data() + static_cast<std::size_t>(b) * n, static_cast<std::size_t>(n)};
    }

    // Wraps explicit count rows (tests, exhaustive enumerations). Every row
    // must sum to n.
    static ResamplePlan from_counts(int n, std::vector<std::uint32_t> counts);
};

struct BootstrapEnsemble {
    std::shared_ptr<const ResamplePlan> plan;
    MeasureKind kind = MeasureKind::Accuracy;
    int B = 0;
    int m = 0;
    std::vector<double> theta_star;  // B x m, row-major
    std::vector<double> plugin;      // per-model estimate under uniform weights
    int degenerate_rows = 0;         // AUC: resamples containing a single class

    double value(int b, int j) const {
        return theta_star[static_cast<std::size_t>(b) * m + j];
    }
    std::vector<double> model_column(int j) const;
};

// Draws B independent multinomial(n; 1/n,...,1/n) count vectors.
ResamplePlan draw_resamples(int n, int B, std::uint64_t seed);

// Evaluates the measure for every (resample, model) pair as the weighted
// measure with weights counts_b / n. AUC resamples containing one class only
// take the plug-in estimate and are tallied in degenerate_rows.
BootstrapEnsemble bootstrap_performance(const EvaluationTable& data, MeasureKind kind,
                                        const ResamplePlan& plan, int threads = 1);

} // namespace mabt
