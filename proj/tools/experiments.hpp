#pragma once

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"

namespace zpflab {

/// Runs a validated experiment, writing into the output directory and filling the summary.
using Job = std::function<void(OutputDir&, json& summary)>;

/// Reads and validates every parameter, returning the job to execute.
/// Throws ConfigError or zpf::ArgumentError on invalid input.
using Planner = std::function<Job(Params&, const RunConfig&)>;

struct ExperimentEntry {
    std::string name;  ///< config / report name, e.g. "filament-solve"
    Planner plan;
};

const std::vector<ExperimentEntry>& experiments();
const ExperimentEntry& experiment(const std::string& name);

}  // namespace zpflab
