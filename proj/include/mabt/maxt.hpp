// Multiplicity correction via per-model ECDF transforms and the maximum
// ECDF, and the MABT calibration producing the final lower confidence bound.
#pragma once

#include <string>
#include <vector>

#include "mabt/resample.hpp"
#include "mabt/tilting.hpp"
#include "mabt/types.hpp"

namespace mabt {

// Per-model bootstrap ECDFs F*_j and the rank-transformed estimates
// u*_bj = F*_j(theta*_bj), which are uniform on the unit interval.
struct EcdfTransform {
    int B = 0;
    int m = 0;
    std::vector<std::vector<double>> sorted_columns; // m sorted sequences of length B
    std::vector<double> u;                           // B x m, row-major

    // F*_j(x) = #{b : theta*_bj <= x} / B.
    double query(std::size_t j, double x) const;
    double u_value(int b, int j) const { return u[static_cast<std::size_t>(b) * m + j]; }
};

// ECDF of the row maxima u*_{b,max} = max_j u*_bj.
struct MaxEcdf {
    std::vector<double> sorted_max; // ascending, values in (0, 1]

    double query(double x) const;
};

EcdfTransform model_ecdfs(const BootstrapEnsemble& ensemble);
MaxEcdf max_ecdf(const EcdfTransform& transform);

// MABT lower confidence bound for the selected model: calibrates tau < 0 so
// that the maximum ECDF evaluated at the tilted ECDF value of theta_hat_s
// stays at or above 1 - alpha (largest such tau), then evaluates the measure
// at the tilted weights. Degenerate families fall back to the tilting
// module's fallback at the Sidak-adjusted level alpha_Sidak(m).
CalibrationResult mabt_lower_bound(const EvaluationTable& data, MeasureKind kind,
                                   std::size_t selected, const BootstrapEnsemble& ensemble,
                                   double alpha, const TiltOptions& options = {});

struct ModelBound {
    std::string model_id;
    bool ok = false;
    CalibrationResult result;
    std::string error;
};

// Runs the MABT calibration once per model in the selected role, sharing one
// ensemble and one maximum ECDF. Per-model failures are reported in place.
std::vector<ModelBound> simultaneous_bounds(const EvaluationTable& data, MeasureKind kind,
                                            const BootstrapEnsemble& ensemble, double alpha,
                                            const TiltOptions& options = {}, int threads = 1);

} // namespace mabt
