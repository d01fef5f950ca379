#include "mabt/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace mabt {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

void check_summary(const BinomialSummary& s) {
    if (s.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (s.successes < 0 || s.successes > s.trials)
        throw std::invalid_argument("successes must lie in [0, trials]");
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Continued fraction for the incomplete beta function (Lentz's method).
double beta_cf(double x, double a, double b) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace

double beta_cdf(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("beta parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(x, a, b) / a;
    return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double beta_quantile(double p, double a, double b) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (beta_cdf(mid, a, b) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("probability must lie in (0, 1)");

    // Acklam's coefficients.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};

    constexpr double p_low = 0.02425;
    double q, r, x;
    if (p < p_low) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        q = p - 0.5;
        r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    return x;
}

double sidak_adjust(double alpha, int m) {
    check_alpha(alpha);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    // 1 - (1-alpha)^(1/m) without cancellation.
    return -std::expm1(std::log1p(-alpha) / static_cast<double>(m));
}

double wald_lower(const BinomialSummary& summary, double alpha) {
    check_summary(summary);
    check_alpha(alpha);
    const double n = summary.trials;
    const double p_hat = summary.successes / n;
    const double z = normal_quantile(1.0 - alpha);
    return clamp01(p_hat - z * std::sqrt(p_hat * (1.0 - p_hat) / n));
}

double wilson_lower(const BinomialSummary& summary, double alpha) {
    check_summary(summary);
    check_alpha(alpha);
    const double n = summary.trials;
    const double p_hat = summary.successes / n;
    const double z = normal_quantile(1.0 - alpha);
    const double z2 = z * z;
    const double center = p_hat + z2 / (2.0 * n);
    const double spread = z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
    return clamp01((center - spread) / (1.0 + z2 / n));
}

double cp_lower(const BinomialSummary& summary, double alpha) {
    check_summary(summary);
    check_alpha(alpha);
    if (summary.successes == 0) return 0.0;
    // Lower bound is the alpha quantile of Beta(x, n - x + 1).
    return beta_quantile(alpha, static_cast<double>(summary.successes),
                         static_cast<double>(summary.trials - summary.successes + 1));
}

AucSummary delong_components(std::span<const int> labels, std::span<const double> scores) {
    if (labels.size() != scores.size())
        throw std::invalid_argument("labels and scores differ in length");

    int n_pos = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0 or 1");
        n_pos += y;
    }
    const int n_neg = static_cast<int>(labels.size()) - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("DeLong components require both classes");

    // V10_i: mean of psi over negatives for each positive;
    // V01_j: mean of psi over positives for each negative.
    std::vector<double> v10;
    std::vector<double> v01(labels.size(), 0.0);
    v10.reserve(n_pos);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] != 0) continue;
            const double psi =
                scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
            row += psi;
            v01[j] += psi;
        }
        v10.push_back(row / n_neg);
    }

    double auc = 0.0;
    for (double v : v10) auc += v;
    auc /= n_pos;

    auto sample_var = [](const std::vector<double>& xs, double mean) {
        if (xs.size() < 2) return 0.0;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return ss / (xs.size() - 1.0);
    };

    std::vector<double> v01_means;
    v01_means.reserve(n_neg);
    for (std::size_t j = 0; j < labels.size(); ++j)
        if (labels[j] == 0) v01_means.push_back(v01[j] / n_pos);

    const double s10 = sample_var(v10, auc);
    const double s01 = sample_var(v01_means, auc);

    AucSummary out;
    out.auc = auc;
    out.n_pos = n_pos;
    out.n_neg = n_neg;
    out.variance = s10 / n_pos + s01 / n_neg;
    return out;
}

double delong_lower(const AucSummary& summary, double alpha) {
    check_alpha(alpha);
    if (summary.variance < 0.0) throw std::invalid_argument("variance must be nonnegative");
    const double z = normal_quantile(1.0 - alpha);
    return clamp01(summary.auc - z * std::sqrt(summary.variance));
}

double hm_lower(const AucSummary& summary, double alpha) {
    check_alpha(alpha);
    if (summary.n_pos < 1 || summary.n_neg < 1)
        throw std::invalid_argument("class counts must be >= 1");
    const double a = summary.auc;
    const double q1 = a / (2.0 - a);
    const double q2 = 2.0 * a * a / (1.0 + a);
    const double var = (a * (1.0 - a) + (summary.n_pos - 1.0) * (q1 - a * a) +
                        (summary.n_neg - 1.0) * (q2 - a * a)) /
                       (static_cast<double>(summary.n_pos) * summary.n_neg);
    const double z = normal_quantile(1.0 - alpha);
    return clamp01(a - z * std::sqrt(std::max(var, 0.0)));
}

} // namespace mabt
