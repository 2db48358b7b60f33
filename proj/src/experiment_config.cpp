#include "gridprobe/experiment_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gridprobe/errors.hpp"

namespace gridprobe {

namespace {

std::string trim(const std::string& s) {
    const std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const std::size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& value, int line) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + value + "'");
    }
    if (used != value.size()) fail(line, "trailing characters after number '" + value + "'");
    return v;
}

std::int64_t parse_int(const std::string& value, int line) {
    std::size_t used = 0;
    std::int64_t v;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        fail(line, "expected an integer, got '" + value + "'");
    }
    if (used != value.size()) fail(line, "trailing characters after integer '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& value, int line) {
    std::size_t used = 0;
    std::uint64_t v;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        fail(line, "expected an unsigned integer, got '" + value + "'");
    }
    if (used != value.size()) fail(line, "trailing characters after integer '" + value + "'");
    return v;
}

bool parse_bool(const std::string& value, int line) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    fail(line, "expected true or false, got '" + value + "'");
}

Range parse_range(const std::string& value, int line) {
    std::istringstream stream(value);
    std::string lo, hi, extra;
    if (!(stream >> lo >> hi) || (stream >> extra))
        fail(line, "expected 'low high' range, got '" + value + "'");
    Range r{parse_double(lo, line), parse_double(hi, line)};
    if (r.lo > r.hi) fail(line, "empty range: " + value);
    return r;
}

}  // namespace

std::vector<DegradationSpec> default_scenario_matrix() {
    std::vector<DegradationSpec> specs;
    specs.push_back({DegradationKind::None, 0});
    specs.push_back({DegradationKind::MissingVoltage, 0});
    specs.push_back({DegradationKind::MissingCurrent, 0});
    for (int k : {2, 4, 8, 16, 32, 64}) specs.push_back({DegradationKind::ReducedRate, k});
    for (int r = 1; r <= 8; ++r) specs.push_back({DegradationKind::RelayFailure, r});
    for (int s = 1; s <= 3; ++s) specs.push_back({DegradationKind::SubstationFailure, s});
    for (int p = 0; p < 3; ++p) specs.push_back({DegradationKind::PhaseFailure, p});
    for (int ms : {5, 10, 20, 40}) specs.push_back({DegradationKind::TemporalLoss, ms});
    return specs;
}

void ExperimentConfig::validate() const {
    if (episodes < 25) throw ConfigError("episodes must be at least 25 (5 per fold)");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    if (tasks.empty()) throw ConfigError("tasks must name at least one of fc, fl");
    if (scenarios.empty()) throw ConfigError("scenario list is empty");
    if (train.batch_size < 1 || train.max_epochs < 1 || train.patience < 1)
        throw ConfigError("train parameters must be positive");
    if (train.learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
    if (train.val_fraction <= 0.0 || train.val_fraction >= 1.0)
        throw ConfigError("val_fraction must lie in (0, 1)");
    if (train.hidden1 < 1 || train.hidden2 < 1) throw ConfigError("hidden sizes must be positive");
    try {
        grid.validate();
    } catch (const std::exception& err) {
        throw ConfigError(err.what());
    }
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool scenarios_given = false;

    std::istringstream stream(text);
    std::string raw;
    std::string section;
    int line_no = 0;

    while (std::getline(stream, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "dataset" && section != "train" && section != "run")
                fail(line_no, "unknown section [" + section + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "missing key before '='");
        if (value.empty()) fail(line_no, "missing value for key '" + key + "'");

        if (section == "dataset") {
            if (key == "episodes")
                cfg.episodes = static_cast<std::size_t>(parse_int(value, line_no));
            else if (key == "master_seed")
                cfg.master_seed = parse_u64(value, line_no);
            else if (key == "nominal_voltage_kv")
                cfg.grid.nominal_voltage_kv = parse_double(value, line_no);
            else if (key == "frequency_hz")
                cfg.grid.frequency_hz = parse_double(value, line_no);
            else if (key == "sample_rate_hz")
                cfg.grid.sample_rate_hz = parse_double(value, line_no);
            else if (key == "duration_s")
                cfg.grid.duration_s = parse_double(value, line_no);
            else if (key == "line_length_km")
                cfg.grid.line_length_km = parse_range(value, line_no);
            else if (key == "load_level")
                cfg.grid.load_level = parse_range(value, line_no);
            else if (key == "source_impedance")
                cfg.grid.source_impedance = parse_range(value, line_no);
            else if (key == "fault_duration_s")
                cfg.grid.fault_duration_s = parse_range(value, line_no);
            else if (key == "inception_time_s")
                cfg.grid.inception_time_s = parse_range(value, line_no);
            else if (key == "dc_time_constant_s")
                cfg.grid.dc_time_constant_s = parse_range(value, line_no);
            else if (key == "impedance_angle_rad")
                cfg.grid.impedance_angle_rad = parse_range(value, line_no);
            else if (key == "echo_attenuation")
                cfg.grid.echo_attenuation = parse_range(value, line_no);
            else if (key == "line_impedance_per_km")
                cfg.grid.line_impedance_per_km = parse_double(value, line_no);
            else if (key == "snr_db")
                cfg.grid.snr_db = parse_double(value, line_no);
            else if (key == "clearing_recovery_s")
                cfg.grid.clearing_recovery_s = parse_double(value, line_no);
            else
                fail(line_no, "unknown key '" + key + "' in [dataset]");
        } else if (section == "train") {
            if (key == "learning_rate")
                cfg.train.learning_rate = parse_double(value, line_no);
            else if (key == "beta1")
                cfg.train.beta1 = parse_double(value, line_no);
            else if (key == "beta2")
                cfg.train.beta2 = parse_double(value, line_no);
            else if (key == "epsilon")
                cfg.train.epsilon = parse_double(value, line_no);
            else if (key == "batch_size")
                cfg.train.batch_size = static_cast<int>(parse_int(value, line_no));
            else if (key == "max_epochs")
                cfg.train.max_epochs = static_cast<int>(parse_int(value, line_no));
            else if (key == "patience")
                cfg.train.patience = static_cast<int>(parse_int(value, line_no));
            else if (key == "val_fraction")
                cfg.train.val_fraction = parse_double(value, line_no);
            else if (key == "hidden1")
                cfg.train.hidden1 = static_cast<int>(parse_int(value, line_no));
            else if (key == "hidden2")
                cfg.train.hidden2 = static_cast<int>(parse_int(value, line_no));
            else
                fail(line_no, "unknown key '" + key + "' in [train]");
        } else if (section == "run") {
            if (key == "scenario") {
                try {
                    cfg.scenarios.push_back(parse_spec(value));
                } catch (const std::invalid_argument& err) {
                    fail(line_no, err.what());
                }
                scenarios_given = true;
            } else if (key == "tasks") {
                cfg.tasks.clear();
                std::istringstream list(value);
                std::string item;
                while (std::getline(list, item, ',')) {
                    const std::string name = trim(item);
                    if (name == "fc")
                        cfg.tasks.push_back(Task::FC);
                    else if (name == "fl")
                        cfg.tasks.push_back(Task::FL);
                    else
                        fail(line_no, "unknown task '" + name + "' (expected fc or fl)");
                }
            } else if (key == "jobs") {
                cfg.jobs = static_cast<int>(parse_int(value, line_no));
            } else if (key == "output_dir") {
                cfg.output_dir = value;
            } else if (key == "degrade_test_only") {
                cfg.eval.degrade_test_only = parse_bool(value, line_no);
            } else if (key == "f1_average") {
                if (value == "macro")
                    cfg.eval.f1_average = F1Average::Macro;
                else if (value == "micro")
                    cfg.eval.f1_average = F1Average::Micro;
                else if (value == "weighted")
                    cfg.eval.f1_average = F1Average::Weighted;
                else
                    fail(line_no, "f1_average must be macro, micro, or weighted");
            } else {
                fail(line_no, "unknown key '" + key + "' in [run]");
            }
        } else {
            fail(line_no, "key '" + key + "' outside any [section]");
        }
    }

    if (!scenarios_given) cfg.scenarios = default_scenario_matrix();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingInputError("config file not found: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace gridprobe
