// External file formats: the prediction CSV ingested by `bound`, the
// RunRecord results CSV written by `simulate`, and the key-value bound
// report. All emitted files are UTF-8 with LF line endings and '.' decimals.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mabt/api.hpp"
#include "mabt/simlab.hpp"
#include "mabt/types.hpp"

namespace mabt {

// Prediction CSV: header `y,<model_id_1>,...,<model_id_m>`; y in {0,1};
// model columns in {0,1} for accuracy and real-valued for AUC.
EvaluationTable parse_prediction_csv(std::istream& in, MeasureKind kind,
                                     const std::string& origin = "input");
EvaluationTable parse_prediction_csv_file(const std::string& path, MeasureKind kind);
std::string serialize_prediction_csv(const EvaluationTable& table);

// Results CSV written by `simulate`: leading `# key = value` lines echo the
// fully resolved configuration, then one header line and one row per
// (run, rule, method).
extern const char* const kResultsHeader;

struct ResultsFile {
    std::vector<std::string> config_echo; // the `# ...` lines, without newline
    std::vector<std::string> experiments; // experiment id per record
    std::vector<RunRecord> records;
};

void write_results_csv(std::ostream& out, const std::vector<std::string>& config_echo,
                       const std::vector<std::string>& experiments,
                       const std::vector<RunRecord>& records);
ResultsFile read_results_csv(std::istream& in, const std::string& origin = "input");
ResultsFile read_results_csv_file(const std::string& path);

// Flat dotted-key report document for one BoundReport, plus the optional
// one-row-per-method CSV flavour.
std::string format_bound_report(const BoundReport& report, const std::string& input_name);
std::string format_bound_report_csv(const BoundReport& report);

// Fixed-format floating point rendering used by every emitted file, so
// output is byte-stable across runs and thread counts.
std::string format_double(double value);

} // namespace mabt
