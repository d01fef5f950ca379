// The fixed method registry for lower confidence bounds and the per-method
// computation shared by the CLI and the simulation lab.
#pragma once

#include <string>
#include <vector>

#include "mabt/resample.hpp"
#include "mabt/tilting.hpp"
#include "mabt/types.hpp"

namespace mabt {

// Registered method names: mabt, bt, wald, wilson, cp, delong, hm. All but
// mabt accept the "+sidak" suffix, which runs them at the Sidak-adjusted
// level alpha_Sidak(m) = 1 - (1 - alpha)^(1/m).
struct MethodSpec {
    std::string base;
    bool sidak = false;

    std::string id() const { return sidak ? base + "+sidak" : base; }
};

MethodSpec parse_method(const std::string& name);
std::vector<MethodSpec> parse_method_list(const std::string& comma_separated);

// Measure compatibility per the interval/measure matrix: wald, wilson and cp
// are accuracy-only; delong and hm are AUC-only; bt and mabt work for both.
bool method_supports_measure(const MethodSpec& method, MeasureKind kind);

// mabt is defined for multi-model evaluations only.
bool method_supports_m(const MethodSpec& method, std::size_t m);

struct MethodResult {
    double lower = 0.0;
    double alpha_nominal = 0.0;
    double alpha_adjusted = 0.0;
    bool fallback_used = false;
    bool tau_valid = false;
    double tau = 0.0;
    double achieved_level = 0.0;
    long long iterations = 0;
};

// Computes one method's lower bound for the selected model. The ensemble is
// required for bt/mabt and ignored by the closed-form baselines.
MethodResult compute_method_bound(const MethodSpec& method, const EvaluationTable& data,
                                  MeasureKind kind, std::size_t selected,
                                  const BootstrapEnsemble& ensemble, double alpha,
                                  const TiltOptions& options = {});

// Default resample counts: 10000 for accuracy, 2000 for AUC.
int default_resamples(MeasureKind kind);

} // namespace mabt
