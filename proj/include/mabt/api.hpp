// High-level entry point: evaluate all requested bound methods on a
// prediction table. Shared by the CLI and the python bindings.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mabt/methods.hpp"
#include "mabt/types.hpp"

namespace mabt {

struct BoundReport {
    static constexpr const char* schema_version = "1";

    MeasureKind kind = MeasureKind::Accuracy;
    double alpha = 0.05;
    int B = 0;
    std::uint64_t seed = 0;
    int threads = 1;
    std::size_t n = 0;
    std::size_t m = 0;
    int degenerate_rows = 0;
    std::string selected_id;
    std::size_t selected_index = 0;
    double theta_hat = 0.0;
    std::vector<std::pair<MethodSpec, MethodResult>> bounds;
    std::vector<double> plugin; // per-model plug-in estimates, input column order
};

// Validates the table and method list, draws the bootstrap ensemble once
// (B = 0 picks the measure default), selects the final model by evaluation
// performance, and computes every requested bound for it.
BoundReport compute_bounds(const EvaluationTable& data, MeasureKind kind,
                           const std::vector<MethodSpec>& methods, double alpha, int B,
                           std::uint64_t seed, int threads = 1);

} // namespace mabt
