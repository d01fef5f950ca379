// Simulation configuration: flat key-value text with one [section] per
// experiment. Unknown keys are errors, and the resolved configuration is
// echoed into the results file so no default stays hidden.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mabt/simlab.hpp"

namespace mabt {

struct ExperimentFile {
    ExperimentConfig config;
    std::string dataset_path; // empty unless a dataset injection file was given
};

struct SimulationConfigFile {
    std::vector<ExperimentFile> experiments;
};

SimulationConfigFile parse_simulation_config(std::istream& in,
                                             const std::string& origin = "config");
SimulationConfigFile parse_simulation_config_file(const std::string& path);

// One "name.key = value" line per resolved setting, fixed order.
std::vector<std::string> echo_resolved_config(const ExperimentFile& experiment);

} // namespace mabt
