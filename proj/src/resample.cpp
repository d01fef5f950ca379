#include "mabt/resample.hpp"

#include <numeric>

#include "mabt/measures.hpp"
#include "mabt/parallel.hpp"
#include "mabt/rng.hpp"

namespace mabt {

ResamplePlan ResamplePlan::from_counts(int n, std::vector<std::uint32_t> counts) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (counts.empty() || counts.size() % static_cast<std::size_t>(n) != 0)
        throw std::invalid_argument("counts size must be a positive multiple of n");
    ResamplePlan plan;
    plan.n = n;
    plan.B = static_cast<int>(counts.size() / n);
    plan.seed = 0;
    plan.counts = std::move(counts);
    for (int b = 0; b < plan.B; ++b) {
        std::uint64_t sum = 0;
        for (std::uint32_t c : plan.row(b)) sum += c;
        if (sum != static_cast<std::uint64_t>(n))
            throw std::invalid_argument("every count row must sum to n");
    }
    return plan;
}

std::vector<double> BootstrapEnsemble::model_column(int j) const {
    std::vector<double> col(B);
    for (int b = 0; b < B; ++b) col[b] = value(b, j);
    return col;
}

ResamplePlan draw_resamples(int n, int B, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (B < 1) throw std::invalid_argument("B must be >= 1");

    ResamplePlan plan;
    plan.n = n;
    plan.B = B;
    plan.seed = seed;
    plan.counts.assign(static_cast<std::size_t>(n) * B, 0);
    for (int b = 0; b < B; ++b) {
        SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(b)));
        auto* row = plan.counts.data() + static_cast<std::size_t>(b) * n;
        for (int i = 0; i < n; ++i)
            ++row[rng.uniform_below(static_cast<std::uint64_t>(n))];
    }
    return plan;
}

BootstrapEnsemble bootstrap_performance(const EvaluationTable& data, MeasureKind kind,
                                        const ResamplePlan& plan, int threads) {
    data.validate(kind);
    if (plan.n != static_cast<int>(data.n()))
        throw std::invalid_argument("resample plan was drawn for a different n");

    const int n = plan.n;
    const int B = plan.B;
    const int m = static_cast<int>(data.m());

    BootstrapEnsemble out;
    out.plan = std::make_shared<ResamplePlan>(plan);
    out.kind = kind;
    out.B = B;
    out.m = m;
    out.theta_star.assign(static_cast<std::size_t>(B) * m, 0.0);

    const auto uniform = WeightVector::uniform(data.n());
    out.plugin.resize(m);
    for (int j = 0; j < m; ++j) out.plugin[j] = weighted_measure(data, kind, j, uniform);

    // Sort orders per column so each AUC resample costs O(n).
    std::vector<std::vector<std::size_t>> orders;
    if (kind == MeasureKind::Auc) {
        orders.resize(m);
        for (int j = 0; j < m; ++j) orders[j] = detail::score_order(data.column(j));
    }

    std::vector<int> degenerate(B, 0);
    parallel_for(static_cast<std::size_t>(B), threads, [&](std::size_t b) {
        const auto counts = plan.row(static_cast<int>(b));

        if (kind == MeasureKind::Auc) {
            std::uint32_t pos_draws = 0;
            for (int i = 0; i < n; ++i)
                if (data.labels[i] == 1) pos_draws += counts[i];
            if (pos_draws == 0 || pos_draws == static_cast<std::uint32_t>(n)) {
                degenerate[b] = 1;
                for (int j = 0; j < m; ++j)
                    out.theta_star[b * m + j] = out.plugin[j];
                return;
            }
        }

        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) w[i] = static_cast<double>(counts[i]) / n;
        const WeightVector weights(std::move(w));
        for (int j = 0; j < m; ++j) {
            const auto& col = data.column(j);
            out.theta_star[b * m + j] =
                kind == MeasureKind::Accuracy
                    ? weighted_accuracy(data.labels, std::span<const double>(col), weights)
                    : detail::weighted_auc_ordered(data.labels, col, orders[j],
                                                   weights.values());
        }
    });

    out.degenerate_rows = std::accumulate(degenerate.begin(), degenerate.end(), 0);
    return out;
}

} // namespace mabt
