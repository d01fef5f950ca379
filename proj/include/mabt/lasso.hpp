// L1-regularized logistic regression fitted by cyclic coordinate descent on
// the IRLS quadratic approximation, and the equidistant regularization grid
// used by the simulation lab.
#pragma once

#include <span>
#include <vector>

#include "mabt/data.hpp"
#include "mabt/selection.hpp"

namespace mabt {

struct LassoModel {
    double lambda = 0.0;
    double intercept = 0.0;
    std::vector<double> beta;
    long long sweeps = 0;
    bool converged = true;

    // Linear predictor; the hard label thresholds the inverse logit at 1/2,
    // i.e. the linear predictor at 0.
    double score(std::span<const double> x) const;
    int label(std::span<const double> x) const;
    Predictor predictor() const;

    double l1_norm() const;
};

// Smallest lambda at which the lasso KKT conditions hold at the
// intercept-only solution: max_j |<x_j, y - mean(y)>| / n.
double lambda_max(const Matrix& x, const std::vector<int>& y);

struct LassoFitOptions {
    double tol = 1e-7;          // max coefficient change per full pass
    long long max_sweeps = 10000;
    int max_irls = 100;
};

LassoModel fit_logistic_lasso(const Matrix& x, const std::vector<int>& y, double lambda,
                              const LassoModel* warm_start = nullptr,
                              const LassoFitOptions& options = {});

// grid_size models over equidistant lambdas on [0, lambda_max]; the zero
// endpoint is replaced by lambda_max / 1000 for conditioning. Fitted from
// the largest lambda down with warm starts; returned in ascending grid-index
// order (index 0 = least regularized).
std::vector<LassoModel> train_model_grid(const Matrix& x, const std::vector<int>& y,
                                         int grid_size = 100,
                                         const LassoFitOptions& options = {});

} // namespace mabt
