#include "mabt/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>

#include "mabt/baselines.hpp"
#include "mabt/lasso.hpp"
#include "mabt/measures.hpp"
#include "mabt/parallel.hpp"
#include "mabt/rng.hpp"

namespace mabt {

void ScenarioAConfig::validate() const {
    if (n_total < 8) throw std::invalid_argument("n_total is too small to split");
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    if (n_nonzero < 0 || n_nonzero > p)
        throw std::invalid_argument("n_nonzero must lie in [0, p]");
    const double fsum = train_fraction + validation_fraction + evaluation_fraction;
    if (std::abs(fsum - 1.0) > 1e-9)
        throw std::invalid_argument("split fractions must sum to 1");
    if (!(train_fraction > 0.0 && validation_fraction > 0.0 && evaluation_fraction > 0.0))
        throw std::invalid_argument("split fractions must be positive");
    if (ground_truth_n < 100) throw std::invalid_argument("ground_truth_n must be >= 100");
}

namespace {

Dataset draw_scenario_a_set(const ScenarioAConfig& config, int rows, std::uint64_t stream) {
    Dataset out;
    out.x = Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(config.p));
    out.y.resize(rows);
    SplitMix64 rng(stream);
    for (int i = 0; i < rows; ++i) {
        double eta = 0.0;
        for (int j = 0; j < config.p; ++j) {
            const double v = normal_quantile(rng.uniform_open());
            out.x.at(i, j) = v;
            if (j < config.n_nonzero) eta += config.signal_c * v;
        }
        const double u = rng.uniform_open();
        out.y[i] = (1.0 / (1.0 + std::exp(-eta)) >= u) ? 1 : 0;
    }
    return out;
}

} // namespace

ScenarioData gen_scenario_a(const ScenarioAConfig& config) {
    config.validate();
    const int n_train = static_cast<int>(std::floor(config.n_total * config.train_fraction));
    const int n_val = static_cast<int>(std::floor(config.n_total * config.validation_fraction));
    const int n_eval = config.n_total - n_train - n_val;
    if (n_train < 2 || n_val < 2 || n_eval < 2)
        throw std::invalid_argument("split produces a set with fewer than 2 observations");

    ScenarioData data;
    data.train = draw_scenario_a_set(config, n_train, derive_stream(config.seed, 1));
    data.validation = draw_scenario_a_set(config, n_val, derive_stream(config.seed, 2));
    data.evaluation = draw_scenario_a_set(config, n_eval, derive_stream(config.seed, 3));
    data.ground_truth =
        draw_scenario_a_set(config, config.ground_truth_n, derive_stream(config.seed, 4));
    return data;
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
    if (B != 0 && B < 100) throw std::invalid_argument("B must be >= 100");
    if (grid_size < 2) throw std::invalid_argument("grid_size must be >= 2");
    if (rules.empty()) throw std::invalid_argument("at least one selection rule is required");
    if (methods.empty()) throw std::invalid_argument("at least one method is required");
    if (!injected) scenario.validate();
    if (cv_folds < 2) throw std::invalid_argument("cv_folds must be >= 2");

    for (const auto& method : methods)
        if (!method_supports_measure(method, measure))
            throw std::invalid_argument("method '" + method.id() + "' does not apply to " +
                                        to_string(measure));
    for (const auto& rule : rules)
        if (rule.kind == SelectionRule::Kind::WithinOneSe &&
            validation != ValidationSource::Cv)
            throw std::invalid_argument(
                "within-1-se preselection requires validation = cv");

    // Every requested method must be usable under at least one rule; mabt is
    // multi-model only.
    for (const auto& method : methods) {
        if (method.base != "mabt") continue;
        bool usable = false;
        for (const auto& rule : rules)
            usable = usable || rule.kind != SelectionRule::Kind::SingleBest;
        if (!usable)
            throw std::invalid_argument("mabt needs a multi-model selection rule "
                                        "(top-fraction or within-1-se)");
    }
}

int ExperimentConfig::resolved_B() const { return B == 0 ? default_resamples(measure) : B; }

namespace {

Dataset concat(const Dataset& a, const Dataset& b) {
    Dataset out;
    out.x = Matrix(a.x.rows + b.x.rows, a.x.cols);
    std::copy(a.x.values.begin(), a.x.values.end(), out.x.values.begin());
    std::copy(b.x.values.begin(), b.x.values.end(), out.x.values.begin() + a.x.values.size());
    out.y = a.y;
    out.y.insert(out.y.end(), b.y.begin(), b.y.end());
    return out;
}

Dataset take_rows(const Dataset& data, std::span<const int> rows) {
    Dataset out;
    out.x = Matrix(rows.size(), data.x.cols);
    out.y.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto src = data.x.row(static_cast<std::size_t>(rows[r]));
        std::copy(src.begin(), src.end(), out.x.values.begin() + r * data.x.cols);
        out.y[r] = data.y[static_cast<std::size_t>(rows[r])];
    }
    return out;
}

// Shuffled split of an injected dataset into train/validation/evaluation by
// the configured fractions; the full file doubles as the ground-truth set.
ScenarioData split_injected(const Dataset& injected, const ScenarioAConfig& config,
                            std::uint64_t stream) {
    const int n = static_cast<int>(injected.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 rng(stream);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[i], order[j]);
    }
    const int n_train = static_cast<int>(std::floor(n * config.train_fraction));
    const int n_val = static_cast<int>(std::floor(n * config.validation_fraction));
    const int n_eval = n - n_train - n_val;
    if (n_train < 2 || n_val < 2 || n_eval < 2)
        throw std::invalid_argument("injected dataset is too small for the requested split");

    ScenarioData out;
    out.train = take_rows(injected, std::span<const int>(order).subspan(0, n_train));
    out.validation =
        take_rows(injected, std::span<const int>(order).subspan(n_train, n_val));
    out.evaluation =
        take_rows(injected, std::span<const int>(order).subspan(n_train + n_val, n_eval));
    out.ground_truth = injected;
    return out;
}

double dataset_performance(const LassoModel& model, const Dataset& data, MeasureKind kind) {
    const std::size_t n = data.size();
    const auto w = WeightVector::uniform(n);
    if (kind == MeasureKind::Accuracy) {
        std::vector<int> preds(n);
        for (std::size_t i = 0; i < n; ++i) preds[i] = model.label(data.x.row(i));
        return weighted_accuracy(data.y, preds, w);
    }
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = model.score(data.x.row(i));
    return weighted_auc(data.y, scores, w);
}

std::vector<RunRecord> one_run(const ExperimentConfig& config, int run) {
    const std::uint64_t run_seed = derive_stream(config.seed, static_cast<std::uint64_t>(run));

    ScenarioAConfig scenario = config.scenario;
    scenario.seed = derive_stream(run_seed, 0);
    const ScenarioData data = config.injected
                                  ? split_injected(*config.injected, scenario, scenario.seed)
                                  : gen_scenario_a(scenario);
    const Dataset learning = concat(data.train, data.validation);

    // Candidate grid and validation scores. The cross-validation variant
    // fixes the lambda sequence on the full learning set, then refits it
    // within each fold.
    std::vector<double> base_lambdas;
    double base_lambda_max = 0.0;
    ValidationScores scores;
    if (config.validation == ValidationSource::Holdout) {
        const auto grid = train_model_grid(data.train.x, data.train.y, config.grid_size);
        base_lambdas.reserve(grid.size());
        for (const auto& model : grid) base_lambdas.push_back(model.lambda);
        base_lambda_max = lambda_max(data.train.x, data.train.y);
        std::vector<Predictor> predictors;
        predictors.reserve(grid.size());
        for (const auto& model : grid) predictors.push_back(model.predictor());
        scores = holdout_scores(predictors, data.validation, config.measure);
    } else {
        const double lmax = lambda_max(learning.x, learning.y);
        base_lambda_max = lmax;
        base_lambdas.resize(config.grid_size);
        for (int t = 0; t < config.grid_size; ++t)
            base_lambdas[t] = lmax * static_cast<double>(t) / (config.grid_size - 1);
        base_lambdas[0] = lmax / 1000.0;

        const GridTrainer trainer = [&](const Matrix& x, const std::vector<int>& y) {
            std::vector<Predictor> out;
            out.reserve(base_lambdas.size());
            const LassoModel* warm = nullptr;
            std::vector<LassoModel> fits(base_lambdas.size());
            for (int t = static_cast<int>(base_lambdas.size()) - 1; t >= 0; --t) {
                fits[t] = fit_logistic_lasso(x, y, base_lambdas[t], warm);
                warm = &fits[t];
            }
            for (auto& fit : fits) out.push_back(fit.predictor());
            return out;
        };
        scores = cv_performance(learning, trainer, config.measure, config.cv_folds,
                                derive_stream(run_seed, 1));
    }

    // Refit scale: map the base grid onto the learning set proportionally.
    double refit_scale = 1.0;
    if (config.refit_rescale_lambda && base_lambda_max > 0.0) {
        refit_scale = lambda_max(learning.x, learning.y) / base_lambda_max;
    }

    std::vector<RunRecord> records;
    for (std::size_t rule_index = 0; rule_index < config.rules.size(); ++rule_index) {
        const auto& rule = config.rules[rule_index];
        const auto outcome = preselect(scores, rule);
        const auto& preselected = outcome.preselected;
        const int m = static_cast<int>(preselected.size());

        // Refit on the entire learning data, then predict the evaluation set.
        EvaluationTable table;
        table.labels = data.evaluation.y;
        std::vector<LassoModel> refits;
        refits.reserve(preselected.size());
        for (std::size_t candidate : preselected) {
            refits.push_back(fit_logistic_lasso(learning.x, learning.y,
                                                base_lambdas[candidate] * refit_scale));
            table.model_ids.push_back("model_" + std::to_string(candidate));
            std::vector<double> col(data.evaluation.size());
            for (std::size_t i = 0; i < col.size(); ++i)
                col[i] = config.measure == MeasureKind::Accuracy
                             ? static_cast<double>(refits.back().label(data.evaluation.x.row(i)))
                             : refits.back().score(data.evaluation.x.row(i));
            table.predictions.push_back(std::move(col));
        }
        table.validate(config.measure);

        const auto plan =
            draw_resamples(static_cast<int>(table.n()), config.resolved_B(),
                           derive_stream(run_seed, 100 + rule_index));
        const auto ensemble = bootstrap_performance(table, config.measure, plan);
        const std::size_t selected = final_select(ensemble.plugin);
        const double theta_true =
            dataset_performance(refits[selected], data.ground_truth, config.measure);

        for (const auto& method : config.methods) {
            if (!method_supports_m(method, table.m())) continue;
            RunRecord rec;
            rec.run = run;
            rec.method = method.id();
            rec.rule = to_string(rule);
            rec.n_total = config.injected ? static_cast<int>(config.injected->size())
                                          : config.scenario.n_total;
            rec.m = m;
            rec.selected_id = table.model_ids[selected];
            rec.alpha = config.alpha;
            rec.theta_hat = ensemble.plugin[selected];
            rec.degenerate_rows = ensemble.degenerate_rows;

            try {
                const auto result = compute_method_bound(method, table, config.measure,
                                                         selected, ensemble, config.alpha);
                rec.alpha_adjusted = result.alpha_adjusted;
                rec.bound = result.lower;
                rec.fallback_used = result.fallback_used;
                rec.tau_valid = result.tau_valid;
                rec.tau = result.tau;
            } catch (const CalibrationFailure&) {
                // No feasible tilt: keep the run with the trivial zero bound.
                rec.alpha_adjusted = config.alpha;
                rec.bound = 0.0;
                rec.fallback_used = true;
            }
            rec.theta_true = theta_true;
            rec.covered = theta_true >= rec.bound;
            rec.tightness = theta_true - rec.bound;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

} // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int threads,
                                      const std::function<void(int)>& progress,
                                      std::vector<std::string>* run_errors) {
    config.validate();
    if (config.injected) config.injected->check();

    std::vector<std::vector<RunRecord>> per_run(config.runs);
    std::vector<std::string> errors(config.runs);
    std::atomic<int> completed{0};
    parallel_for(static_cast<std::size_t>(config.runs), threads, [&](std::size_t run) {
        try {
            per_run[run] = one_run(config, static_cast<int>(run));
        } catch (const std::exception& ex) {
            errors[run] = "run " + std::to_string(run) + ": " + ex.what();
        }
        const int done = ++completed;
        if (progress && done % 100 == 0) progress(done);
    });

    std::vector<RunRecord> records;
    for (auto& chunk : per_run)
        records.insert(records.end(), chunk.begin(), chunk.end());
    if (run_errors)
        for (auto& err : errors)
            if (!err.empty()) run_errors->push_back(std::move(err));
    return records;
}

std::vector<MethodSummary> aggregate(std::span<const RunRecord> records) {
    if (records.empty()) throw std::invalid_argument("no run records to aggregate");

    std::vector<std::pair<std::string, std::string>> order; // (rule, method) first-seen
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
    for (const auto& rec : records) {
        const auto key = std::make_pair(rec.rule, rec.method);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&rec);
    }

    std::vector<MethodSummary> out;
    out.reserve(order.size());
    for (const auto& key : order) {
        const auto& group = groups[key];
        MethodSummary s;
        s.rule = key.first;
        s.method = key.second;
        s.runs = static_cast<int>(group.size());
        s.alpha = group.front()->alpha;
        for (const auto* rec : group)
            if (rec->alpha != s.alpha)
                throw std::invalid_argument("mixed alpha within one (rule, method) group");

        double covered = 0.0;
        for (const auto* rec : group) {
            covered += rec->covered ? 1.0 : 0.0;
            s.mean_bound += rec->bound;
            s.mean_theta_true += rec->theta_true;
            s.mean_tightness += rec->tightness;
            s.fallback_count += rec->fallback_used ? 1 : 0;
        }
        const double n = static_cast<double>(s.runs);
        s.coverage = covered / n;
        s.mean_bound /= n;
        s.mean_theta_true /= n;
        s.mean_tightness /= n;

        double ss_bound = 0.0, ss_theta = 0.0, ss_tight = 0.0;
        for (const auto* rec : group) {
            ss_bound += (rec->bound - s.mean_bound) * (rec->bound - s.mean_bound);
            ss_theta += (rec->theta_true - s.mean_theta_true) *
                        (rec->theta_true - s.mean_theta_true);
            ss_tight += (rec->tightness - s.mean_tightness) *
                        (rec->tightness - s.mean_tightness);
        }
        if (s.runs > 1) {
            s.se_bound = std::sqrt(ss_bound / (n - 1.0) / n);
            s.se_theta_true = std::sqrt(ss_theta / (n - 1.0) / n);
            s.se_tightness = std::sqrt(ss_tight / (n - 1.0) / n);
        }
        s.coverage_se = std::sqrt(s.coverage * (1.0 - s.coverage) / n);
        s.liberal_threshold = 1.0 - s.alpha - std::sqrt((1.0 - s.alpha) * s.alpha / n);
        s.liberal = s.coverage < s.liberal_threshold;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace mabt
