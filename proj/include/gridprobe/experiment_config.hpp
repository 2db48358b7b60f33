#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridprobe/degrade.hpp"
#include "gridprobe/eval.hpp"
#include "gridprobe/grid_config.hpp"
#include "gridprobe/mlp.hpp"

namespace gridprobe {

struct ExperimentConfig {
    GridConfig grid;
    std::size_t episodes = 300;
    std::uint64_t master_seed = 42;
    TrainConfig train;
    std::vector<DegradationSpec> scenarios;  // defaults to the full sparsity matrix
    std::vector<Task> tasks = {Task::FC, Task::FL};
    int jobs = 1;
    std::string output_dir;
    EvalOptions eval;

    void validate() const;  // throws ConfigError on cross-field violations
};

// every Table-style scenario plus the baseline: none, missing_voltage,
// missing_current, rate 2..64, relay 1..8, substation 1..3, phase A..C,
// temporal 5..40 ms
std::vector<DegradationSpec> default_scenario_matrix();

// line-oriented `key = value` format with [section] headers and # comments;
// unknown keys and malformed values raise ConfigError naming the line
ExperimentConfig parse_config(const std::string& text);

// reads and parses a config file; missing file raises MissingInputError
ExperimentConfig load_config_file(const std::string& path);

}  // namespace gridprobe
