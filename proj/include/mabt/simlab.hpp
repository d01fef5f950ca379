// Desk-scale simulation experiments: scenario-A data generation, the
// two-stage selection pipeline over a lasso grid, and coverage/tightness
// aggregation.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mabt/data.hpp"
#include "mabt/methods.hpp"
#include "mabt/selection.hpp"
#include "mabt/types.hpp"

namespace mabt {

struct ScenarioAConfig {
    int n_total = 200;
    int p = 50;
    int n_nonzero = 10;
    double signal_c = 2.0;
    double train_fraction = 0.5;
    double validation_fraction = 0.25;
    double evaluation_fraction = 0.25;
    int ground_truth_n = 10000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ScenarioData {
    Dataset train;
    Dataset validation;
    Dataset evaluation;
    Dataset ground_truth;
};

// Features i.i.d. standard normal, beta = c * (1,...,1,0,...,0) with
// n_nonzero leading ones, labels y_i = I{invlogit(x_i beta) >= u_i} with
// independent uniform u_i. All four sets come from the same law.
ScenarioData gen_scenario_a(const ScenarioAConfig& config);

struct RunRecord {
    int run = 0;
    std::string method;
    std::string rule;
    int n_total = 0;
    int m = 0;
    std::string selected_id;
    double alpha = 0.0;
    double alpha_adjusted = 0.0;
    double theta_hat = 0.0;
    double bound = 0.0;
    double theta_true = 0.0;
    bool covered = false;
    double tightness = 0.0;
    bool fallback_used = false;
    bool tau_valid = false;
    double tau = 0.0;
    int degenerate_rows = 0;
};

struct ExperimentConfig {
    std::string name = "experiment";
    MeasureKind measure = MeasureKind::Accuracy;
    ScenarioAConfig scenario;
    std::optional<Dataset> injected; // replaces scenario-A generation when set
    ValidationSource validation = ValidationSource::Holdout;
    int cv_folds = 10;
    std::vector<SelectionRule> rules;
    std::vector<MethodSpec> methods;
    int runs = 500;
    double alpha = 0.05;
    int B = 0; // 0 = measure default (10000 accuracy / 2000 AUC)
    int grid_size = 100;
    std::uint64_t seed = 1;
    bool refit_rescale_lambda = true; // rescale grid lambdas by the learning-set lambda_max

    void validate() const;
    int resolved_B() const;
};

// Full two-stage pipeline per run: generate data, train the lasso grid,
// compute validation scores, preselect per rule, refit the preselected
// models on the entire learning set, evaluate, select the final model and
// compute every requested bound plus the selected model's ground-truth
// performance. Runs are independent; identical seeds give identical records
// for any thread count. `progress`, when set, receives completed-run counts
// at multiples of 100.
//
// Per-run failures are not fatal: the failing run's records are dropped and
// a message lands in `run_errors` when given. A calibration failure for one
// method records the trivial zero bound with fallback_used set.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int threads = 1,
                                      const std::function<void(int)>& progress = {},
                                      std::vector<std::string>* run_errors = nullptr);

struct MethodSummary {
    std::string method;
    std::string rule;
    int runs = 0;
    double alpha = 0.0;
    double coverage = 0.0;
    double coverage_se = 0.0;
    double liberal_threshold = 0.0;
    bool liberal = false;
    double mean_bound = 0.0;
    double se_bound = 0.0;
    double mean_theta_true = 0.0;
    double se_theta_true = 0.0;
    double mean_tightness = 0.0;
    double se_tightness = 0.0;
    int fallback_count = 0;
};

// Per-(method, rule) summaries. A group is flagged liberal when its coverage
// falls below 1 - alpha - sqrt((1 - alpha) * alpha / runs).
std::vector<MethodSummary> aggregate(std::span<const RunRecord> records);

} // namespace mabt
