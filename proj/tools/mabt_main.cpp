// Command-line front end: compute lower confidence bounds from prediction
// files (`bound`), run simulation studies (`simulate`) and summarize result
// files (`report`).
//
// Exit codes: 0 success, 2 input or validation error, 3 calibration failure
// without fallback.
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mabt/api.hpp"
#include "mabt/config.hpp"
#include "mabt/csvio.hpp"
#include "mabt/selection.hpp"
#include "mabt/simlab.hpp"

namespace {

struct BoundArgs {
    std::string input;
    std::string measure = "accuracy";
    std::string methods;
    std::string rule;
    double alpha = 0.05;
    int B = 0;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;
    std::string csv_out;
};

struct SimulateArgs {
    std::string config;
    std::string out = "results.csv";
    int threads = 1;
};

struct ReportArgs {
    std::string input;
    std::string out;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << text;
}

int run_bound(const BoundArgs& args) {
    const auto kind = mabt::measure_from_string(args.measure);
    const auto methods = mabt::parse_method_list(args.methods);
    if (!args.rule.empty()) mabt::rule_from_string(args.rule); // validate the marker
    const auto table = mabt::parse_prediction_csv_file(args.input, kind);

    const auto report =
        mabt::compute_bounds(table, kind, methods, args.alpha, args.B, args.seed, args.threads);

    std::string text = mabt::format_bound_report(report, args.input);
    if (!args.rule.empty()) text += "rule: " + args.rule + "\n";
    if (args.out.empty())
        std::cout << text;
    else
        write_text(args.out, text);
    if (!args.csv_out.empty()) write_text(args.csv_out, mabt::format_bound_report_csv(report));
    return 0;
}

int run_simulate(const SimulateArgs& args) {
    auto file = mabt::parse_simulation_config_file(args.config);

    std::vector<std::string> echo;
    std::vector<std::string> experiments;
    std::vector<mabt::RunRecord> records;
    for (auto& experiment : file.experiments) {
        if (!experiment.dataset_path.empty()) {
            // Injected dataset: labels plus feature columns in the prediction
            // CSV syntax. The whole file doubles as the ground-truth set.
            const auto table =
                mabt::parse_prediction_csv_file(experiment.dataset_path, mabt::MeasureKind::Auc);
            mabt::Dataset injected;
            injected.y = table.labels;
            injected.x = mabt::Matrix(table.n(), table.m());
            for (std::size_t i = 0; i < table.n(); ++i)
                for (std::size_t j = 0; j < table.m(); ++j)
                    injected.x.at(i, j) = table.predictions[j][i];
            experiment.config.injected = std::move(injected);
            experiment.config.validate();
        }
        const auto lines = mabt::echo_resolved_config(experiment);
        echo.insert(echo.end(), lines.begin(), lines.end());
    }

    for (const auto& experiment : file.experiments) {
        std::cerr << "experiment " << experiment.config.name << ": " << experiment.config.runs
                  << " runs\n";
        std::vector<std::string> run_errors;
        const auto chunk = mabt::run_experiment(
            experiment.config, args.threads,
            [](int done) { std::cerr << "  completed " << done << " runs\n"; }, &run_errors);
        for (const auto& err : run_errors)
            std::cerr << "  [" << experiment.config.name << "] " << err << "\n";
        experiments.insert(experiments.end(), chunk.size(), experiment.config.name);
        records.insert(records.end(), chunk.begin(), chunk.end());
    }

    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + args.out + "'");
    mabt::write_results_csv(out, echo, experiments, records);
    std::cerr << "wrote " << records.size() << " records to " << args.out << "\n";
    return 0;
}

int run_report(const ReportArgs& args) {
    const auto file = mabt::read_results_csv_file(args.input);
    if (file.records.empty())
        throw std::invalid_argument(args.input + ": no run records");

    // Group by experiment, first appearance order.
    std::vector<std::string> names;
    for (const auto& name : file.experiments)
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);

    std::ostringstream out;
    out << "# schema_version: 1\n";
    out << "# liberal threshold: 1 - alpha - sqrt((1 - alpha) * alpha / runs)\n";
    out << std::left << std::setw(16) << "experiment" << std::setw(18) << "rule" << std::setw(14)
        << "method" << std::right << std::setw(6) << "runs" << std::setw(10) << "coverage"
        << std::setw(9) << "cov_se" << std::setw(8) << "liberal" << std::setw(11) << "threshold"
        << std::setw(12) << "mean_bound" << std::setw(12) << "mean_true" << std::setw(12)
        << "tightness" << std::setw(10) << "fallbacks" << '\n';

    for (const auto& name : names) {
        std::vector<mabt::RunRecord> subset;
        for (std::size_t i = 0; i < file.records.size(); ++i)
            if (file.experiments[i] == name) subset.push_back(file.records[i]);
        for (const auto& s : mabt::aggregate(subset)) {
            out << std::left << std::setw(16) << name << std::setw(18) << s.rule
                << std::setw(14) << s.method << std::right << std::setw(6) << s.runs
                << std::fixed << std::setprecision(4) << std::setw(10) << s.coverage
                << std::setw(9) << s.coverage_se << std::setw(8) << (s.liberal ? "yes" : "no")
                << std::setw(11) << s.liberal_threshold << std::setw(12) << s.mean_bound
                << std::setw(12) << s.mean_theta_true << std::setw(12) << s.mean_tightness
                << std::setw(10) << s.fallback_count << '\n';
            out.unsetf(std::ios::fixed);
        }
    }

    if (args.out.empty())
        std::cout << out.str();
    else
        write_text(args.out, out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lower confidence bounds for selected prediction models "
                 "(multiplicity-adjusted bootstrap tilting and classical baselines)"};
    app.require_subcommand(1);

    BoundArgs bound;
    auto* cmd_bound = app.add_subcommand(
        "bound", "Compute lower confidence bounds from a prediction CSV");
    cmd_bound->add_option("input", bound.input, "Prediction CSV (header y,<model>,...)")
        ->required();
    cmd_bound->add_option("--measure", bound.measure, "accuracy or auc");
    cmd_bound->add_option("--methods", bound.methods,
                          "Comma list from {mabt,bt,wald,wilson,cp,delong,hm}; append +sidak "
                          "for the adjusted level")
        ->required();
    cmd_bound->add_option("--rule", bound.rule,
                          "Selection rule that produced the columns (metadata)");
    cmd_bound->add_option("--alpha", bound.alpha, "One-sided significance level");
    cmd_bound->add_option("--B", bound.B, "Bootstrap resamples (0 = measure default)");
    cmd_bound->add_option("--seed", bound.seed, "Resampling seed");
    cmd_bound->add_option("--threads", bound.threads, "Worker threads");
    cmd_bound->add_option("--out", bound.out, "Write the report here instead of stdout");
    cmd_bound->add_option("--csv", bound.csv_out, "Also write a one-row-per-method CSV");

    SimulateArgs simulate;
    auto* cmd_simulate =
        app.add_subcommand("simulate", "Run the simulation experiments from a config file");
    cmd_simulate->add_option("config", simulate.config, "Experiment config file")->required();
    cmd_simulate->add_option("--out", simulate.out, "Results CSV path");
    cmd_simulate->add_option("--threads", simulate.threads, "Worker threads");

    ReportArgs report;
    auto* cmd_report =
        app.add_subcommand("report", "Summarize a results CSV per (rule, method)");
    cmd_report->add_option("input", report.input, "Results CSV from simulate")->required();
    cmd_report->add_option("--out", report.out, "Write the summary here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_bound->parsed()) return run_bound(bound);
        if (cmd_simulate->parsed()) return run_simulate(simulate);
        if (cmd_report->parsed()) return run_report(report);
    } catch (const mabt::CalibrationFailure& ex) {
        std::cerr << "calibration failure: " << ex.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
