#include "flks/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace flks {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("non-numeric value for key '" + key + "': " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("non-integer value for key '" + key + "': " + value);
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw ConfigError("empty element in list for key '" + key + "'");
        out.push_back(parse_double(key, item.substr(a, b - a + 1)));
    }
    if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
    return out;
}

void RunConfig::validate() const {
    const auto positive = [](double v, const char* key) {
        if (!(v > 0.0)) throw ConfigError(std::string("key '") + key + "' must be > 0");
    };
    positive(chi_hat, "chi_hat");
    positive(stiffness, "stiffness");
    positive(d, "d");
    positive(p, "p");
    positive(L_hat, "L_hat");
    positive(t_end_hat, "t_end_hat");
    if (cells < 3) throw ConfigError("key 'cells' must be >= 3");
    if (!(L0_hat > 0.0 && L0_hat < L_hat))
        throw ConfigError("key 'L0_hat' must lie in (0, L_hat)");
    if (!(fit_begin_hat >= 0.0 && fit_end_hat > fit_begin_hat))
        throw ConfigError("keys 'fit_begin_hat'/'fit_end_hat' must satisfy 0 <= begin < end");
    for (double ts : snapshot_times_hat)
        if (!(ts >= 0.0 && ts <= t_end_hat))
            throw ConfigError("key 'snapshot_times' entries must lie in [0, t_end_hat]");
    if (out_dir.empty()) throw ConfigError("key 'out_dir' must not be empty");
}

ModelParams RunConfig::to_params() const {
    const double chi = chi_hat * std::sqrt(p);
    const double delta = 2.0 * chi / (std::numbers::pi * stiffness);
    return ModelParams(FluxModel::arctan(chi, delta), ProliferationModel(p), d);
}

GridSpec RunConfig::to_grid() const {
    return GridSpec(from_hatted_x(L_hat, p), cells, from_hatted_t(dt_hat(), p));
}

double RunConfig::L0() const { return from_hatted_x(L0_hat, p); }
double RunConfig::t_end() const { return from_hatted_t(t_end_hat, p); }

std::vector<double> RunConfig::snapshot_times() const {
    std::vector<double> ts_hat = snapshot_times_hat;
    if (ts_hat.empty()) {
        if (t_end_hat > 50.0) ts_hat.push_back(t_end_hat - 50.0);
        ts_hat.push_back(t_end_hat);
    }
    std::vector<double> out;
    out.reserve(ts_hat.size());
    for (double ts : ts_hat) out.push_back(from_hatted_t(ts, p));
    return out;
}

void SweepConfig::validate() const {
    base.validate();
    if (chi_hat_values.empty()) throw ConfigError("key 'chi_hat_values' must be non-empty");
    if (stiffness_values.empty()) throw ConfigError("key 'stiffness_values' must be non-empty");
    if (max_parallel < 0) throw ConfigError("key 'max_parallel' must be >= 0");
}

void apply_preset(RunConfig& config, const std::string& name) {
    if (name == "paper") {
        config.L_hat = 1000.0;
        config.cells = 10000;
        config.t_end_hat = 400.0;
        config.fit_begin_hat = 300.0;
        config.fit_end_hat = 400.0;
    } else if (name == "coarse") {
        config.L_hat = 500.0;
        config.cells = 2500;
        config.t_end_hat = 300.0;
        config.fit_begin_hat = 200.0;
        config.fit_end_hat = 300.0;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected paper or coarse)");
    }
}

void apply_key(const std::string& key, const std::string& value, RunConfig& run,
               SweepConfig* sweep) {
    if (key == "chi_hat") run.chi_hat = parse_double(key, value);
    else if (key == "stiffness") run.stiffness = parse_double(key, value);
    else if (key == "d") run.d = parse_double(key, value);
    else if (key == "p") run.p = parse_double(key, value);
    else if (key == "L_hat") run.L_hat = parse_double(key, value);
    else if (key == "cells") run.cells = parse_int(key, value);
    else if (key == "L0_hat") run.L0_hat = parse_double(key, value);
    else if (key == "t_end_hat") run.t_end_hat = parse_double(key, value);
    else if (key == "fit_begin_hat") run.fit_begin_hat = parse_double(key, value);
    else if (key == "fit_end_hat") run.fit_end_hat = parse_double(key, value);
    else if (key == "snapshot_times") run.snapshot_times_hat = parse_double_list(key, value);
    else if (key == "out_dir") run.out_dir = value;
    else if (key == "preset") apply_preset(run, value);
    else if (sweep && key == "chi_hat_values") sweep->chi_hat_values = parse_double_list(key, value);
    else if (sweep && key == "stiffness_values")
        sweep->stiffness_values = parse_double_list(key, value);
    else if (sweep && key == "max_parallel") sweep->max_parallel = parse_int(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

void load_config_file(const std::string& path, RunConfig& run, SweepConfig* sweep) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        apply_key(key, value, run, sweep);
    }
}

void write_resolved(const RunConfig& run, const std::string& path, const SweepConfig* sweep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "chi_hat = " << format_double(run.chi_hat) << "\n"
        << "stiffness = " << format_double(run.stiffness) << "\n"
        << "d = " << format_double(run.d) << "\n"
        << "p = " << format_double(run.p) << "\n"
        << "L_hat = " << format_double(run.L_hat) << "\n"
        << "cells = " << run.cells << "\n"
        << "L0_hat = " << format_double(run.L0_hat) << "\n"
        << "t_end_hat = " << format_double(run.t_end_hat) << "\n"
        << "fit_begin_hat = " << format_double(run.fit_begin_hat) << "\n"
        << "fit_end_hat = " << format_double(run.fit_end_hat) << "\n";
    if (!run.snapshot_times_hat.empty()) {
        out << "snapshot_times = ";
        for (std::size_t i = 0; i < run.snapshot_times_hat.size(); ++i)
            out << (i ? "," : "") << format_double(run.snapshot_times_hat[i]);
        out << "\n";
    }
    out << "out_dir = " << run.out_dir << "\n";
    if (sweep) {
        out << "chi_hat_values = ";
        for (std::size_t i = 0; i < sweep->chi_hat_values.size(); ++i)
            out << (i ? "," : "") << format_double(sweep->chi_hat_values[i]);
        out << "\nstiffness_values = ";
        for (std::size_t i = 0; i < sweep->stiffness_values.size(); ++i)
            out << (i ? "," : "") << format_double(sweep->stiffness_values[i]);
        out << "\nmax_parallel = " << sweep->max_parallel << "\n";
    }
}

}  // namespace flks
