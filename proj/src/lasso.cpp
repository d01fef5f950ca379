#include "mabt/lasso.hpp"

#include <algorithm>
#include <cmath>

namespace mabt {

namespace {

double soft_threshold(double g, double lambda) {
    if (g > lambda) return g - lambda;
    if (g < -lambda) return g + lambda;
    return 0.0;
}

double invlogit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double label_mean(const std::vector<int>& y) {
    double mean = 0.0;
    for (int v : y) {
        if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1");
        mean += v;
    }
    mean /= static_cast<double>(y.size());
    if (mean == 0.0 || mean == 1.0)
        throw std::invalid_argument("labels are constant; no signal direction");
    return mean;
}

} // namespace

double LassoModel::score(std::span<const double> x) const {
    double eta = intercept;
    for (std::size_t j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) eta += beta[j] * x[j];
    return eta;
}

int LassoModel::label(std::span<const double> x) const { return score(x) >= 0.0 ? 1 : 0; }

Predictor LassoModel::predictor() const {
    LassoModel copy = *this;
    return Predictor{
        [copy](std::span<const double> x) { return copy.score(x); },
        [copy](std::span<const double> x) { return copy.label(x); },
    };
}

double LassoModel::l1_norm() const {
    double sum = 0.0;
    for (double b : beta) sum += std::abs(b);
    return sum;
}

double lambda_max(const Matrix& x, const std::vector<int>& y) {
    if (x.rows != y.size()) throw std::invalid_argument("feature rows and labels differ");
    if (x.rows == 0) throw std::invalid_argument("empty data");
    const double mean = label_mean(y);
    const double n = static_cast<double>(x.rows);
    double best = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i)
            dot += x.at(i, j) * (static_cast<double>(y[i]) - mean);
        best = std::max(best, std::abs(dot) / n);
    }
    return best;
}

LassoModel fit_logistic_lasso(const Matrix& x, const std::vector<int>& y, double lambda,
                              const LassoModel* warm_start, const LassoFitOptions& options) {
    if (x.rows != y.size()) throw std::invalid_argument("feature rows and labels differ");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    const std::size_t n = x.rows;
    const std::size_t p = x.cols;
    const double mean = label_mean(y);

    LassoModel model;
    model.lambda = lambda;
    if (warm_start && warm_start->beta.size() == p) {
        model.intercept = warm_start->intercept;
        model.beta = warm_start->beta;
    } else {
        model.intercept = std::log(mean / (1.0 - mean));
        model.beta.assign(p, 0.0);
    }

    std::vector<double> eta(n);
    auto refresh_eta = [&] {
        for (std::size_t i = 0; i < n; ++i) eta[i] = model.score(x.row(i));
    };
    refresh_eta();

    std::vector<double> w(n), resid(n), xwx(p);
    const double dn = static_cast<double>(n);
    bool done = false;

    for (int irls = 0; irls < options.max_irls && !done; ++irls) {
        // Quadratic approximation at the current eta.
        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pi = invlogit(eta[i]);
            pi = std::clamp(pi, 1e-5, 1.0 - 1e-5);
            w[i] = pi * (1.0 - pi);
            resid[i] = (static_cast<double>(y[i]) - pi) / w[i];
            wsum += w[i];
        }
        for (std::size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += w[i] * x.at(i, j) * x.at(i, j);
            xwx[j] = s / dn;
        }

        double outer_change = 0.0;
        while (true) {
            double sweep_change = 0.0;

            double num = 0.0;
            for (std::size_t i = 0; i < n; ++i) num += w[i] * resid[i];
            const double d0 = num / wsum;
            if (d0 != 0.0) {
                model.intercept += d0;
                for (std::size_t i = 0; i < n; ++i) resid[i] -= d0;
                sweep_change = std::max(sweep_change, std::abs(d0));
            }

            for (std::size_t j = 0; j < p; ++j) {
                if (xwx[j] <= 0.0) continue;
                double g = 0.0;
                for (std::size_t i = 0; i < n; ++i) g += w[i] * x.at(i, j) * resid[i];
                g = g / dn + xwx[j] * model.beta[j];
                const double bj = soft_threshold(g, lambda) / xwx[j];
                const double d = bj - model.beta[j];
                if (d != 0.0) {
                    for (std::size_t i = 0; i < n; ++i) resid[i] -= x.at(i, j) * d;
                    model.beta[j] = bj;
                    sweep_change = std::max(sweep_change, std::abs(d));
                }
            }

            ++model.sweeps;
            outer_change = std::max(outer_change, sweep_change);
            if (sweep_change < options.tol) break;
            if (model.sweeps >= options.max_sweeps) {
                model.converged = false;
                done = true;
                break;
            }
        }

        refresh_eta();
        if (outer_change < options.tol) done = true;
    }
    return model;
}

std::vector<LassoModel> train_model_grid(const Matrix& x, const std::vector<int>& y,
                                         int grid_size, const LassoFitOptions& options) {
    if (grid_size < 2) throw std::invalid_argument("grid size must be >= 2");
    const double lmax = lambda_max(x, y);

    std::vector<double> lambdas(grid_size);
    for (int t = 0; t < grid_size; ++t)
        lambdas[t] = lmax * static_cast<double>(t) / static_cast<double>(grid_size - 1);
    lambdas[0] = lmax / 1000.0;

    // Fit the path from the strongest penalty down, carrying warm starts.
    std::vector<LassoModel> models(grid_size);
    const LassoModel* warm = nullptr;
    for (int t = grid_size - 1; t >= 0; --t) {
        models[t] = fit_logistic_lasso(x, y, lambdas[t], warm, options);
        warm = &models[t];
    }
    return models;
}

} // namespace mabt
