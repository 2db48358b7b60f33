#pragma once

#include <string>

#include "gridprobe/experiment_config.hpp"

namespace gridprobe {

// synthesizes the dataset and writes the GPB1 container plus the metadata
// sidecar (<out_path>.meta.csv)
void cmd_generate(const ExperimentConfig& cfg, const std::string& out_path);

// executes the scenario matrix against a generated dataset, appending
// per-fold rows to <out_dir>/results.csv as they finish (existing rows are
// reused, making interrupted runs resumable) and rewriting
// <out_dir>/aggregate.csv in canonical order at the end
void cmd_run(const ExperimentConfig& cfg, const std::string& dataset_path,
             const std::string& out_dir);

// renders <results_dir>/aggregate.csv into a downsampling table
// (<out_dir>/report.md) and per-figure CSVs; a pure function of the results
void cmd_report(const std::string& results_dir, const std::string& out_dir);

}  // namespace gridprobe
