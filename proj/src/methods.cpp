#include "mabt/methods.hpp"

#include <cmath>
#include <sstream>

#include "mabt/baselines.hpp"
#include "mabt/maxt.hpp"
#include "mabt/measures.hpp"

namespace mabt {

namespace {

const std::vector<std::string> kRegistry = {"mabt", "bt", "wald", "wilson",
                                            "cp",   "delong", "hm"};

BinomialSummary correct_count(const EvaluationTable& data, std::size_t model) {
    const auto& col = data.column(model);
    int x = 0;
    for (std::size_t i = 0; i < data.n(); ++i)
        if (static_cast<double>(data.labels[i]) == col[i]) ++x;
    return BinomialSummary{x, static_cast<int>(data.n())};
}

} // namespace

MethodSpec parse_method(const std::string& name) {
    MethodSpec spec;
    spec.base = name;
    const auto plus = name.find('+');
    if (plus != std::string::npos) {
        spec.base = name.substr(0, plus);
        const std::string suffix = name.substr(plus + 1);
        if (suffix != "sidak")
            throw std::invalid_argument("unknown method suffix '+" + suffix + "' in '" + name + "'");
        spec.sidak = true;
    }
    bool known = false;
    for (const auto& rec : kRegistry) known = known || rec == spec.base;
    if (!known) throw std::invalid_argument("unknown method '" + spec.base + "'");
    if (spec.base == "mabt" && spec.sidak)
        throw std::invalid_argument("mabt carries its own multiplicity adjustment; "
                                    "'mabt+sidak' is not a method");
    return spec;
}

std::vector<MethodSpec> parse_method_list(const std::string& comma_separated) {
    std::vector<MethodSpec> out;
    std::stringstream ss(comma_separated);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_method(item));
    }
    if (out.empty()) throw std::invalid_argument("empty method list");
    return out;
}

bool method_supports_measure(const MethodSpec& method, MeasureKind kind) {
    if (method.base == "wald" || method.base == "wilson" || method.base == "cp")
        return kind == MeasureKind::Accuracy;
    if (method.base == "delong" || method.base == "hm") return kind == MeasureKind::Auc;
    return true;
}

bool method_supports_m(const MethodSpec& method, std::size_t m) {
    if (method.base == "mabt") return m >= 2;
    return true;
}

int default_resamples(MeasureKind kind) {
    return kind == MeasureKind::Accuracy ? 10000 : 2000;
}

MethodResult compute_method_bound(const MethodSpec& method, const EvaluationTable& data,
                                  MeasureKind kind, std::size_t selected,
                                  const BootstrapEnsemble& ensemble, double alpha,
                                  const TiltOptions& options) {
    if (!method_supports_measure(method, kind))
        throw std::invalid_argument("method '" + method.id() + "' does not apply to " +
                                    to_string(kind));
    if (!method_supports_m(method, data.m()))
        throw std::invalid_argument("mabt needs at least two evaluated models; use bt for a "
                                    "single model");

    MethodResult out;
    out.alpha_nominal = alpha;
    out.alpha_adjusted =
        method.sidak ? sidak_adjust(alpha, static_cast<int>(data.m())) : alpha;
    const double level = out.alpha_adjusted;

    if (method.base == "mabt") {
        const auto cal = mabt_lower_bound(data, kind, selected, ensemble, alpha, options);
        out.lower = cal.lower_bound;
        out.fallback_used = cal.fallback_used;
        out.tau_valid = !cal.fallback_used;
        out.tau = cal.tau;
        out.achieved_level = cal.achieved_level;
        out.iterations = cal.iterations;
        return out;
    }
    if (method.base == "bt") {
        const auto cal = bt_lower_bound(data, kind, selected, ensemble, level, options);
        out.lower = cal.lower_bound;
        out.fallback_used = cal.fallback_used;
        out.tau_valid = !cal.fallback_used;
        out.tau = cal.tau;
        out.achieved_level = cal.achieved_level;
        out.iterations = cal.iterations;
        return out;
    }

    if (method.base == "wald") {
        out.lower = wald_lower(correct_count(data, selected), level);
        return out;
    }
    if (method.base == "wilson") {
        out.lower = wilson_lower(correct_count(data, selected), level);
        return out;
    }
    if (method.base == "cp") {
        out.lower = cp_lower(correct_count(data, selected), level);
        return out;
    }

    const auto summary = delong_components(data.labels, data.column(selected));
    out.lower = method.base == "delong" ? delong_lower(summary, level)
                                        : hm_lower(summary, level);
    return out;
}

} // namespace mabt
