#include "gridprobe/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>
#include <vector>

#include "gridprobe/dataset_io.hpp"
#include "gridprobe/errors.hpp"
#include "gridprobe/eval.hpp"
#include "gridprobe/grid_sim.hpp"
#include "gridprobe/rng.hpp"

namespace fs = std::filesystem;

namespace gridprobe {

namespace {

const char* task_name(Task t) { return t == Task::FC ? "fc" : "fl"; }

std::string metric_name(Task t, const EvalOptions& options) {
    if (t == Task::FL) return "mae_percent";
    switch (options.f1_average) {
        case F1Average::Micro: return "f1_micro";
        case F1Average::Weighted: return "f1_weighted";
        default: return "f1_macro";
    }
}

// "rate:16" -> {"rate", "16"}; "none" -> {"none", ""}
std::pair<std::string, std::string> split_scenario(const DegradationSpec& spec) {
    const std::string text = spec_to_string(spec);
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) return {text, ""};
    return {text.substr(0, colon), text.substr(colon + 1)};
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

// baseline first, then the remaining scenarios in config order
std::vector<DegradationSpec> run_order(const std::vector<DegradationSpec>& scenarios) {
    std::vector<DegradationSpec> ordered;
    ordered.push_back({DegradationKind::None, 0});
    for (const DegradationSpec& spec : scenarios)
        if (spec.kind != DegradationKind::None) ordered.push_back(spec);
    return ordered;
}

struct FoldJob {
    Task task;
    DegradationSpec spec;
    int fold;
};

using ResultKey = std::tuple<std::string, std::string, int>;  // scenario text, task, fold

std::map<ResultKey, double> load_existing_results(const std::string& path) {
    std::map<ResultKey, double> done;
    std::ifstream in(path);
    if (!in) return done;
    std::string line;
    if (!std::getline(in, line)) return done;  // header
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 7)
            throw std::runtime_error("corrupt results.csv at line " + std::to_string(line_no));
        const std::string scenario_text =
            fields[1].empty() ? fields[0] : fields[0] + ":" + fields[1];
        done[{scenario_text, fields[2], std::stoi(fields[3])}] = std::stod(fields[5]);
    }
    return done;
}

}  // namespace

void cmd_generate(const ExperimentConfig& cfg, const std::string& out_path) {
    const auto parent = fs::path(out_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);

    std::vector<Episode> episodes =
        generate_dataset(cfg.grid, cfg.episodes, cfg.master_seed, cfg.jobs);
    write_dataset(out_path, episodes);
    write_sidecar(out_path + ".meta.csv", episodes);
    std::cout << "generated " << episodes.size() << " episodes -> " << out_path << "\n";
}

void cmd_run(const ExperimentConfig& cfg, const std::string& dataset_path,
             const std::string& out_dir) {
    if (!fs::exists(dataset_path))
        throw MissingInputError("dataset file not found: " + dataset_path);
    fs::create_directories(out_dir);

    const std::vector<Episode> episodes = read_dataset(dataset_path);
    const std::vector<WindowRef> all_refs = segment_dataset(episodes);
    const FoldAssignment folds = kfold_split(episodes.size(), 5, cfg.master_seed);

    const std::string results_path = out_dir + "/results.csv";
    std::map<ResultKey, double> results = load_existing_results(results_path);

    const bool fresh = results.empty() && !fs::exists(results_path);
    std::ofstream results_out(results_path, std::ios::app);
    if (!results_out) throw std::runtime_error("cannot open " + results_path + " for writing");
    if (fresh) {
        results_out << "scenario,param,task,fold,metric_name,value,seed\n";
        results_out.flush();
    }

    const std::vector<DegradationSpec> ordered = run_order(cfg.scenarios);
    std::vector<FoldJob> pending;
    for (Task task : cfg.tasks)
        for (const DegradationSpec& spec : ordered)
            for (int fold = 0; fold < 5; ++fold) {
                if (results.count({spec_to_string(spec), task_name(task), fold})) continue;
                pending.push_back({task, spec, fold});
            }

    std::mutex mu;
    std::atomic<std::size_t> cursor{0};
    std::string first_error;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= pending.size()) return;
            const FoldJob& job = pending[i];
            try {
                const double value = run_fold(episodes, all_refs, folds, job.fold, job.spec,
                                              cfg.train, job.task, cfg.master_seed, cfg.eval);
                const auto [scenario, param] = split_scenario(job.spec);
                const std::uint64_t seed = mix_seed(
                    scenario_seed(cfg.master_seed, job.spec, job.task),
                    static_cast<std::uint64_t>(job.fold));
                // store the value exactly as results.csv will reproduce it, so
                // resumed and fresh runs aggregate identical inputs
                const std::string text = fmt_double(value);
                std::lock_guard<std::mutex> lock(mu);
                results[{spec_to_string(job.spec), task_name(job.task), job.fold}] =
                    std::strtod(text.c_str(), nullptr);
                results_out << scenario << ',' << param << ',' << task_name(job.task) << ','
                            << job.fold << ',' << metric_name(job.task, cfg.eval) << ','
                            << text << ',' << seed << '\n';
                results_out.flush();
            } catch (const std::exception& err) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failed.exchange(true))
                    first_error = std::string(err.what()) + " [scenario " +
                                  spec_to_string(job.spec) + ", task " + task_name(job.task) +
                                  ", fold " + std::to_string(job.fold) + "]";
            }
        }
    };

    if (cfg.jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < cfg.jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed.load()) throw TrainingError(first_error);

    // aggregates are derived data; rebuild them wholesale in canonical order
    const std::string aggregate_path = out_dir + "/aggregate.csv";
    std::ofstream agg(aggregate_path, std::ios::trunc);
    if (!agg) throw std::runtime_error("cannot open " + aggregate_path + " for writing");
    agg << "scenario,param,task,mean,std,delta_vs_baseline_pct\n";

    for (Task task : cfg.tasks) {
        double baseline_mean = std::numeric_limits<double>::quiet_NaN();
        for (const DegradationSpec& spec : ordered) {
            std::array<double, 5> values{};
            bool complete = true;
            for (int fold = 0; fold < 5; ++fold) {
                const auto it = results.find({spec_to_string(spec), task_name(task), fold});
                if (it == results.end()) {
                    complete = false;
                    break;
                }
                values[static_cast<std::size_t>(fold)] = it->second;
            }
            if (!complete) continue;
            const ScenarioResult r = aggregate_scenario(spec, task, values, baseline_mean);
            if (spec.kind == DegradationKind::None) baseline_mean = r.mean;
            const auto [scenario, param] = split_scenario(spec);
            agg << scenario << ',' << param << ',' << task_name(task) << ',' << fmt_double(r.mean)
                << ',' << fmt_double(r.stddev) << ',' << fmt_double(r.delta_vs_baseline_pct)
                << '\n';
        }
    }
    agg.flush();
    std::cout << "results -> " << results_path << "\n";
}

namespace {

struct AggregateRow {
    std::string scenario;
    std::string param;
    std::string task;
    double mean = 0.0;
    double stddev = 0.0;
    double delta_pct = 0.0;
};

std::vector<AggregateRow> load_aggregate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingInputError("aggregate results not found: " + path);
    std::vector<AggregateRow> rows;
    std::string line;
    std::getline(in, line);  // header
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6)
            throw std::runtime_error("corrupt aggregate.csv at line " + std::to_string(line_no));
        rows.push_back({fields[0], fields[1], fields[2], std::stod(fields[3]),
                        std::stod(fields[4]), std::stod(fields[5])});
    }
    return rows;
}

const AggregateRow* find_row(const std::vector<AggregateRow>& rows, const std::string& scenario,
                             const std::string& param, const std::string& task) {
    for (const AggregateRow& row : rows)
        if (row.scenario == scenario && row.param == param && row.task == task) return &row;
    return nullptr;
}

void write_figure_csv(const std::string& path, const std::vector<AggregateRow>& rows,
                      const std::vector<std::string>& scenarios) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "scenario,param,task,mean,std,delta_pct\n";
    for (const AggregateRow& row : rows) {
        for (const std::string& name : scenarios) {
            if (row.scenario != name) continue;
            out << row.scenario << ',' << row.param << ',' << row.task << ','
                << fmt_double(row.mean) << ',' << fmt_double(row.stddev) << ','
                << fmt_double(row.delta_pct) << '\n';
        }
    }
}

}  // namespace

void cmd_report(const std::string& results_dir, const std::string& out_dir) {
    const std::vector<AggregateRow> rows = load_aggregate(results_dir + "/aggregate.csv");
    fs::create_directories(out_dir);

    std::ofstream report(out_dir + "/report.md", std::ios::trunc);
    if (!report) throw std::runtime_error("cannot open report.md for writing");

    report << "# Robustness results\n\n";
    report << "## Downsampling\n\n";
    report << "| Factor | Frequency (Hz) | FC F1 | FL MAE (%) |\n";
    report << "|--------|----------------|-------|------------|\n";

    char buf[128];
    auto cell = [&](const AggregateRow* row, const char* fmt) -> std::string {
        if (!row) return "-";
        std::snprintf(buf, sizeof(buf), fmt, row->mean, row->stddev);
        return buf;
    };

    const std::vector<std::pair<std::string, std::string>> factors = {
        {"none", ""}, {"rate", "2"}, {"rate", "4"}, {"rate", "8"},
        {"rate", "16"}, {"rate", "32"}, {"rate", "64"}};
    for (const auto& [scenario, param] : factors) {
        const AggregateRow* fc = find_row(rows, scenario, param, "fc");
        const AggregateRow* fl = find_row(rows, scenario, param, "fl");
        if (!fc && !fl) continue;
        const int factor = param.empty() ? 1 : std::stoi(param);
        report << "| x" << factor << " | " << fmt_double(6400.0 / factor) << " | "
               << cell(fc, "%.3f +- %.3f") << " | " << cell(fl, "%.2f +- %.2f") << " |\n";
    }

    report << "\n## Scenario deltas\n\n";
    report << "| Scenario | Task | Mean | Std | Delta vs baseline (%) |\n";
    report << "|----------|------|------|-----|------------------------|\n";
    for (const AggregateRow& row : rows) {
        const std::string label = row.param.empty() ? row.scenario : row.scenario + ":" + row.param;
        report << "| " << label << " | " << row.task << " | " << fmt_double(row.mean) << " | "
               << fmt_double(row.stddev) << " | " << fmt_double(row.delta_pct) << " |\n";
    }

    write_figure_csv(out_dir + "/figure_channel_loss.csv", rows,
                     {"missing_voltage", "missing_current"});
    write_figure_csv(out_dir + "/figure_relay_outage.csv", rows, {"relay"});
    write_figure_csv(out_dir + "/figure_substation_outage.csv", rows, {"substation"});
    write_figure_csv(out_dir + "/figure_phase_loss.csv", rows, {"phase"});
    write_figure_csv(out_dir + "/figure_temporal_loss.csv", rows, {"temporal"});
    std::cout << "report -> " << out_dir << "/report.md\n";
}

}  // namespace gridprobe
