// Classical one-sided lower confidence bounds (Wald, Wilson, Clopper-Pearson,
// DeLong, Hanley-McNeil) and the Sidak multiplicity adjustment. These serve
// as comparison methods and as fallbacks for degenerate tilting families.
#pragma once

#include <span>

#include "mabt/types.hpp"

namespace mabt {

struct BinomialSummary {
    int successes = 0;
    int trials = 0;
};

struct AucSummary {
    double auc = 0.0;
    int n_pos = 0;
    int n_neg = 0;
    double variance = 0.0;
};

// Standard normal quantile, Acklam's rational approximation
// (relative error below 1.2e-9 over (0,1)).
double normal_quantile(double p);

// Regularized incomplete beta function I_x(a, b), evaluated by the
// Lentz continued fraction.
double beta_cdf(double x, double a, double b);

// Inverse of beta_cdf in x, by bisection to absolute tolerance 1e-10.
double beta_quantile(double p, double a, double b);

// Per-test level 1 - (1 - alpha)^(1/m).
double sidak_adjust(double alpha, int m);

double wald_lower(const BinomialSummary& summary, double alpha);
double wilson_lower(const BinomialSummary& summary, double alpha);
double cp_lower(const BinomialSummary& summary, double alpha);

// DeLong structural-components estimator of the AUC and its variance.
AucSummary delong_components(std::span<const int> labels, std::span<const double> scores);

double delong_lower(const AucSummary& summary, double alpha);

// Hanley-McNeil variance with the Q1/Q2 moments; summary.variance is ignored.
double hm_lower(const AucSummary& summary, double alpha);

} // namespace mabt
