#include "mabt/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "mabt/csvio.hpp"

namespace mabt {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": invalid number '" + value + "'");
    }
}

long long to_integer(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": invalid integer '" + value + "'");
    }
}

void apply_key(ExperimentFile& experiment, const std::string& key, const std::string& value,
               const std::string& where) {
    auto& config = experiment.config;
    if (key == "measure") {
        config.measure = measure_from_string(value);
    } else if (key == "runs") {
        config.runs = static_cast<int>(to_integer(value, where));
    } else if (key == "alpha") {
        config.alpha = to_double(value, where);
    } else if (key == "B") {
        config.B = static_cast<int>(to_integer(value, where));
    } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(to_integer(value, where));
    } else if (key == "rules") {
        config.rules.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!trim(item).empty()) config.rules.push_back(rule_from_string(trim(item)));
    } else if (key == "methods") {
        config.methods = parse_method_list(value);
    } else if (key == "validation") {
        if (value == "holdout")
            config.validation = ValidationSource::Holdout;
        else if (value == "cv" || value == "cv10")
            config.validation = ValidationSource::Cv;
        else
            throw std::invalid_argument(where + ": validation must be holdout or cv");
    } else if (key == "cv_folds") {
        config.cv_folds = static_cast<int>(to_integer(value, where));
    } else if (key == "grid_size") {
        config.grid_size = static_cast<int>(to_integer(value, where));
    } else if (key == "n_total") {
        config.scenario.n_total = static_cast<int>(to_integer(value, where));
    } else if (key == "p") {
        config.scenario.p = static_cast<int>(to_integer(value, where));
    } else if (key == "n_nonzero") {
        config.scenario.n_nonzero = static_cast<int>(to_integer(value, where));
    } else if (key == "signal_c") {
        config.scenario.signal_c = to_double(value, where);
    } else if (key == "ground_truth_n") {
        config.scenario.ground_truth_n = static_cast<int>(to_integer(value, where));
    } else if (key == "split") {
        std::stringstream ss(value);
        std::string a, b, c;
        if (!std::getline(ss, a, '/') || !std::getline(ss, b, '/') || !std::getline(ss, c))
            throw std::invalid_argument(where + ": split must look like 0.5/0.25/0.25");
        config.scenario.train_fraction = to_double(trim(a), where);
        config.scenario.validation_fraction = to_double(trim(b), where);
        config.scenario.evaluation_fraction = to_double(trim(c), where);
    } else if (key == "dataset") {
        experiment.dataset_path = value;
    } else if (key == "refit_lambda") {
        if (value == "proportional")
            config.refit_rescale_lambda = true;
        else if (value == "fixed")
            config.refit_rescale_lambda = false;
        else
            throw std::invalid_argument(where + ": refit_lambda must be proportional or fixed");
    } else {
        throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
}

} // namespace

SimulationConfigFile parse_simulation_config(std::istream& in, const std::string& origin) {
    SimulationConfigFile out;
    std::unordered_set<std::string> names;
    std::string line;
    int row = 0;
    bool have_section = false;

    while (std::getline(in, line)) {
        ++row;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const std::string where = origin + ":" + std::to_string(row);

        if (text.front() == '[') {
            if (text.back() != ']')
                throw std::invalid_argument(where + ": unterminated section header");
            const std::string name = trim(text.substr(1, text.size() - 2));
            if (name.empty()) throw std::invalid_argument(where + ": empty experiment name");
            if (!names.insert(name).second)
                throw std::invalid_argument(where + ": duplicate experiment '" + name + "'");
            out.experiments.emplace_back();
            out.experiments.back().config.name = name;
            have_section = true;
            continue;
        }

        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(where + ": expected 'key = value'");
        if (!have_section)
            throw std::invalid_argument(where + ": key outside of an [experiment] section");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument(where + ": empty key or value");
        apply_key(out.experiments.back(), key, value, where);
    }

    if (out.experiments.empty())
        throw std::invalid_argument(origin + ": no [experiment] sections found");
    for (auto& experiment : out.experiments) {
        if (experiment.config.rules.empty())
            throw std::invalid_argument(origin + ": experiment '" + experiment.config.name +
                                        "' is missing 'rules'");
        if (experiment.config.methods.empty())
            throw std::invalid_argument(origin + ": experiment '" + experiment.config.name +
                                        "' is missing 'methods'");
        if (experiment.dataset_path.empty()) experiment.config.injected.reset();
        experiment.config.validate();
    }
    return out;
}

SimulationConfigFile parse_simulation_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return parse_simulation_config(in, path);
}

std::vector<std::string> echo_resolved_config(const ExperimentFile& experiment) {
    const auto& config = experiment.config;
    const std::string prefix = config.name + ".";
    std::vector<std::string> lines;
    auto add = [&](const std::string& key, const std::string& value) {
        lines.push_back(prefix + key + " = " + value);
    };

    add("measure", to_string(config.measure));
    add("runs", std::to_string(config.runs));
    add("alpha", format_double(config.alpha));
    add("B", std::to_string(config.resolved_B()));
    add("seed", std::to_string(config.seed));
    {
        std::string rules;
        for (const auto& rule : config.rules) {
            if (!rules.empty()) rules += ",";
            rules += to_string(rule);
        }
        add("rules", rules);
    }
    {
        std::string methods;
        for (const auto& method : config.methods) {
            if (!methods.empty()) methods += ",";
            methods += method.id();
        }
        add("methods", methods);
    }
    add("validation", config.validation == ValidationSource::Holdout ? "holdout" : "cv");
    if (config.validation == ValidationSource::Cv)
        add("cv_folds", std::to_string(config.cv_folds));
    add("grid_size", std::to_string(config.grid_size));
    if (!experiment.dataset_path.empty()) {
        add("dataset", experiment.dataset_path);
    } else {
        add("n_total", std::to_string(config.scenario.n_total));
        add("p", std::to_string(config.scenario.p));
        add("n_nonzero", std::to_string(config.scenario.n_nonzero));
        add("signal_c", format_double(config.scenario.signal_c));
        add("ground_truth_n", std::to_string(config.scenario.ground_truth_n));
    }
    add("split", format_double(config.scenario.train_fraction) + "/" +
                     format_double(config.scenario.validation_fraction) + "/" +
                     format_double(config.scenario.evaluation_fraction));
    add("refit_lambda", config.refit_rescale_lambda ? "proportional" : "fixed");
    return lines;
}

} // namespace mabt
