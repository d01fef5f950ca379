#include "mabt/csvio.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mabt {

const char* const kResultsHeader =
    "experiment,run,rule,method,n_total,m,selected,alpha,alpha_adjusted,theta_hat,bound,"
    "theta_true,covered,tightness,fallback,tau,degenerate_rows";

std::string format_double(double value) {
    // Shortest representation that parses back to the same double.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_number(const std::string& token, const std::string& where) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + token.size() || token.empty())
        throw std::invalid_argument(where + ": invalid numeric value '" + token + "'");
    return value;
}

long long parse_integer(const std::string& token, const std::string& where) {
    long long value = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw std::invalid_argument(where + ": invalid integer '" + token + "'");
    return value;
}

} // namespace

EvaluationTable parse_prediction_csv(std::istream& in, MeasureKind kind,
                                     const std::string& origin) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument(origin + ": empty file");
    line = strip_cr(line);
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "y")
        throw std::invalid_argument(origin + ":1: header must start with 'y'");
    if (header.size() < 2)
        throw std::invalid_argument(origin + ":1: at least one model column is required");

    EvaluationTable table;
    table.model_ids.assign(header.begin() + 1, header.end());
    for (std::size_t j = 0; j < table.model_ids.size(); ++j)
        if (table.model_ids[j].empty())
            throw std::invalid_argument(origin + ":1: column " + std::to_string(j + 2) +
                                        " has an empty model id");
    table.predictions.resize(table.model_ids.size());

    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::invalid_argument(origin + ":" + std::to_string(row) + ": expected " +
                                        std::to_string(header.size()) + " fields, got " +
                                        std::to_string(fields.size()));

        const std::string label_where =
            origin + ":" + std::to_string(row) + ": column 1 (y)";
        const double y = parse_number(fields[0], label_where);
        if (y != 0.0 && y != 1.0)
            throw std::invalid_argument(label_where + ": invalid label '" + fields[0] +
                                        "' (must be 0 or 1)");
        table.labels.push_back(static_cast<int>(y));

        for (std::size_t j = 0; j < table.model_ids.size(); ++j) {
            const std::string where = origin + ":" + std::to_string(row) + ": column " +
                                      std::to_string(j + 2) + " (" + table.model_ids[j] + ")";
            const double v = parse_number(fields[j + 1], where);
            if (kind == MeasureKind::Accuracy && v != 0.0 && v != 1.0)
                throw std::invalid_argument(where + ": invalid prediction '" + fields[j + 1] +
                                            "' (accuracy mode needs 0 or 1)");
            table.predictions[j].push_back(v);
        }
    }

    try {
        table.validate(kind);
    } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument(origin + ": " + ex.what());
    }
    return table;
}

EvaluationTable parse_prediction_csv_file(const std::string& path, MeasureKind kind) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return parse_prediction_csv(in, kind, path);
}

std::string serialize_prediction_csv(const EvaluationTable& table) {
    std::ostringstream out;
    out << "y";
    for (const auto& id : table.model_ids) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < table.n(); ++i) {
        out << table.labels[i];
        for (std::size_t j = 0; j < table.m(); ++j)
            out << ',' << format_double(table.predictions[j][i]);
        out << '\n';
    }
    return out.str();
}

void write_results_csv(std::ostream& out, const std::vector<std::string>& config_echo,
                       const std::vector<std::string>& experiments,
                       const std::vector<RunRecord>& records) {
    if (experiments.size() != records.size())
        throw std::invalid_argument("experiment tags and records differ in length");
    for (const auto& line : config_echo) out << "# " << line << '\n';
    out << kResultsHeader << '\n';
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << experiments[i] << ',' << r.run << ',' << r.rule << ',' << r.method << ','
            << r.n_total << ',' << r.m << ',' << r.selected_id << ','
            << format_double(r.alpha) << ',' << format_double(r.alpha_adjusted) << ','
            << format_double(r.theta_hat) << ',' << format_double(r.bound) << ','
            << format_double(r.theta_true) << ',' << (r.covered ? 1 : 0) << ','
            << format_double(r.tightness) << ',' << (r.fallback_used ? 1 : 0) << ','
            << (r.tau_valid ? format_double(r.tau) : std::string()) << ','
            << r.degenerate_rows << '\n';
    }
}

ResultsFile read_results_csv(std::istream& in, const std::string& origin) {
    ResultsFile out;
    std::string line;
    int row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        if (!header_seen && line.rfind("# ", 0) == 0) {
            out.config_echo.push_back(line.substr(2));
            continue;
        }
        if (!header_seen) {
            if (line != kResultsHeader)
                throw std::invalid_argument(origin + ":" + std::to_string(row) +
                                            ": unexpected results header (schema mismatch)");
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 17)
            throw std::invalid_argument(origin + ":" + std::to_string(row) +
                                        ": expected 17 fields, got " +
                                        std::to_string(fields.size()));
        const std::string where = origin + ":" + std::to_string(row);
        RunRecord r;
        out.experiments.push_back(fields[0]);
        r.run = static_cast<int>(parse_integer(fields[1], where));
        r.rule = fields[2];
        r.method = fields[3];
        r.n_total = static_cast<int>(parse_integer(fields[4], where));
        r.m = static_cast<int>(parse_integer(fields[5], where));
        r.selected_id = fields[6];
        r.alpha = parse_number(fields[7], where);
        r.alpha_adjusted = parse_number(fields[8], where);
        r.theta_hat = parse_number(fields[9], where);
        r.bound = parse_number(fields[10], where);
        r.theta_true = parse_number(fields[11], where);
        r.covered = parse_integer(fields[12], where) != 0;
        r.tightness = parse_number(fields[13], where);
        r.fallback_used = parse_integer(fields[14], where) != 0;
        if (!fields[15].empty()) {
            r.tau = parse_number(fields[15], where);
            r.tau_valid = true;
        }
        r.degenerate_rows = static_cast<int>(parse_integer(fields[16], where));
        out.records.push_back(std::move(r));
    }
    if (!header_seen)
        throw std::invalid_argument(origin + ": missing results header (schema mismatch)");
    return out;
}

ResultsFile read_results_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return read_results_csv(in, path);
}

std::string format_bound_report(const BoundReport& report, const std::string& input_name) {
    std::ostringstream out;
    out << "schema_version: " << BoundReport::schema_version << '\n';
    out << "command: bound\n";
    out << "input: " << input_name << '\n';
    out << "measure: " << to_string(report.kind) << '\n';
    out << "alpha: " << format_double(report.alpha) << '\n';
    out << "B: " << report.B << '\n';
    out << "seed: " << report.seed << '\n';
    out << "threads: " << report.threads << '\n';
    out << "n: " << report.n << '\n';
    out << "m: " << report.m << '\n';
    if (report.kind == MeasureKind::Auc)
        out << "degenerate_rows: " << report.degenerate_rows << '\n';
    out << "selected.id: " << report.selected_id << '\n';
    out << "selected.index: " << report.selected_index << '\n';
    out << "selected.theta_hat: " << format_double(report.theta_hat) << '\n';
    for (const auto& [spec, result] : report.bounds) {
        const std::string key = "bound." + spec.id();
        out << key << ".lower: " << format_double(result.lower) << '\n';
        out << key << ".alpha_nominal: " << format_double(result.alpha_nominal) << '\n';
        out << key << ".alpha_adjusted: " << format_double(result.alpha_adjusted) << '\n';
        if (spec.base == "bt" || spec.base == "mabt") {
            out << key << ".fallback: " << (result.fallback_used ? "true" : "false") << '\n';
            if (result.tau_valid) {
                out << key << ".tau: " << format_double(result.tau) << '\n';
                out << key << ".achieved_level: " << format_double(result.achieved_level)
                    << '\n';
                out << key << ".iterations: " << result.iterations << '\n';
            }
        }
    }
    return out.str();
}

std::string format_bound_report_csv(const BoundReport& report) {
    std::ostringstream out;
    out << "method,selected,m,n,alpha,alpha_adjusted,theta_hat,lower,fallback,tau\n";
    for (const auto& [spec, result] : report.bounds) {
        out << spec.id() << ',' << report.selected_id << ',' << report.m << ',' << report.n
            << ',' << format_double(result.alpha_nominal) << ','
            << format_double(result.alpha_adjusted) << ',' << format_double(report.theta_hat)
            << ',' << format_double(result.lower) << ',' << (result.fallback_used ? 1 : 0)
            << ',' << (result.tau_valid ? format_double(result.tau) : std::string()) << '\n';
    }
    return out.str();
}

} // namespace mabt
