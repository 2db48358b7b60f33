#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gridprobe/errors.hpp"
#include "gridprobe/experiment_config.hpp"
#include "gridprobe/mlp.hpp"
#include "gridprobe/runner.hpp"

namespace {

// GRIDPROBE_SEED takes precedence over the config file when set.
void apply_seed_override(gridprobe::ExperimentConfig& cfg) {
    const char* raw = std::getenv("GRIDPROBE_SEED");
    if (!raw || !*raw) return;
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (errno != 0 || end == raw || *end != '\0')
        throw gridprobe::ConfigError(std::string("invalid GRIDPROBE_SEED: ") + raw);
    cfg.master_seed = static_cast<std::uint64_t>(value);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridprobe: observability-loss robustness experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string dataset_path;
    std::string out_path;
    std::string results_dir;
    int jobs = 0;
    bool degrade_test_only = false;

    CLI::App* generate = app.add_subcommand("generate", "synthesize a labeled dataset");
    generate->add_option("--config", config_path, "experiment config file")->required();
    generate->add_option("--out", out_path, "output dataset path")->required();

    CLI::App* run = app.add_subcommand("run", "train and evaluate the scenario matrix");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--dataset", dataset_path, "dataset file from generate")->required();
    run->add_option("--out", out_path, "results directory")->required();
    run->add_option("--jobs", jobs, "worker threads (overrides config)");
    run->add_flag("--degrade-test-only", degrade_test_only,
                  "train on clean data, degrade only the test split");

    CLI::App* report = app.add_subcommand("report", "render tables and figure CSVs");
    report->add_option("--results", results_dir, "results directory from run")->required();
    report->add_option("--out", out_path, "report output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    }

    try {
        if (generate->parsed()) {
            gridprobe::ExperimentConfig cfg = gridprobe::load_config_file(config_path);
            apply_seed_override(cfg);
            gridprobe::cmd_generate(cfg, out_path);
        } else if (run->parsed()) {
            gridprobe::ExperimentConfig cfg = gridprobe::load_config_file(config_path);
            apply_seed_override(cfg);
            if (jobs > 0) cfg.jobs = jobs;
            if (degrade_test_only) cfg.eval.degrade_test_only = true;
            gridprobe::cmd_run(cfg, dataset_path, out_path);
        } else {
            gridprobe::cmd_report(results_dir, out_path);
        }
    } catch (const gridprobe::ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const gridprobe::MissingInputError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const gridprobe::TrainingError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
