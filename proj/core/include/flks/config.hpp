#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "flks/grid.hpp"
#include "flks/model.hpp"

namespace flks {

/// Bad key, bad value, or violated invariant in a config file or flag.
/// Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A single simulation, specified entirely in hatted units. Defaults are
/// the paper preset (L_hat=1000, I=10000, L0_hat=100, dt_hat=dx_hat^2/4,
/// fit window [300, 400], d=4, p=0.5).
struct RunConfig {
    double chi_hat = 1.5;
    double stiffness = 0.01;  // 2 chi / (pi delta)
    double d = 4.0;
    double p = 0.5;
    double L_hat = 1000.0;
    int cells = 10000;
    double L0_hat = 100.0;
    double t_end_hat = 400.0;
    double fit_begin_hat = 300.0;
    double fit_end_hat = 400.0;
    std::vector<double> snapshot_times_hat;  // empty: {t_end-50, t_end}
    std::string out_dir = "out";

    double dx_hat() const { return L_hat / cells; }
    double dt_hat() const { return dx_hat() * dx_hat() / 4.0; }

    void validate() const;  // throws ConfigError naming the offending key

    // Hatted config to physical model and grid.
    ModelParams to_params() const;
    GridSpec to_grid() const;
    double L0() const;
    double t_end() const;
    std::vector<double> snapshot_times() const;  // physical, defaults filled
};

struct SweepConfig {
    std::vector<double> chi_hat_values;
    std::vector<double> stiffness_values;
    RunConfig base;
    int max_parallel = 0;  // 0: hardware concurrency

    void validate() const;
};

/// Named presets: "paper" (the defaults above) and "coarse" (L_hat=500,
/// I=2500, t_end=300, fit window [200, 300]).
void apply_preset(RunConfig& config, const std::string& name);

/// Line-oriented `key = value` file with `#` comments. Unknown keys are
/// rejected. Run keys plus chi_hat_values / stiffness_values / max_parallel
/// (comma-separated lists) when `sweep_keys` is true.
void load_config_file(const std::string& path, RunConfig& run, SweepConfig* sweep = nullptr);

/// Applies one key to the config; throws ConfigError for unknown keys or
/// unparsable values.
void apply_key(const std::string& key, const std::string& value, RunConfig& run,
               SweepConfig* sweep = nullptr);

/// Echoes every resolved key to `path` in the same `key = value` syntax.
void write_resolved(const RunConfig& run, const std::string& path,
                    const SweepConfig* sweep = nullptr);

/// Shortest round-trip decimal form, 17 significant digits.
std::string format_double(double v);

double parse_double(const std::string& key, const std::string& value);
int parse_int(const std::string& key, const std::string& value);
std::vector<double> parse_double_list(const std::string& key, const std::string& value);

}  // namespace flks
