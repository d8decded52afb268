#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flks/config.hpp"
#include "flks/solver.hpp"
#include "flks/wave.hpp"

namespace flks {

/// One row of metrics.csv / phase.csv. All floating quantities hatted.
struct OutputRecord {
    double chi_hat = 0.0;
    double stiffness = 0.0;
    double d = 0.0;
    double p = 0.0;
    std::string solution_type = "unclassified";
    double c_star_hat = 0.0;
    double lambda_star_hat = 0.0;
    double c_dispersion_hat = 0.0;
    double c_min_hat = 0.0;
    double rho_max = 0.0;
    std::string status = "ok";  // ok | non-steady | unclassified | aborted
};

/// In-memory result of one simulation, before any file output.
struct SimulationResult {
    ClassifiedRun classified;
    Trajectory trajectory;
    bool aborted = false;
    std::string error;

    OutputRecord record(const RunConfig& config) const;
};

ClassifyOptions classify_options(const RunConfig& config);

/// Runs one simulation described by `config` and classifies it. Solver
/// failures are captured in the result, not thrown.
SimulationResult run_simulation(const RunConfig& config);

/// Distance (hatted) from the chemoattractant peak to the point where rho
/// falls through rho_c, to its right. The peak is located by parabolic
/// interpolation of the discrete S maximum, the crossing by linear
/// interpolation in rho.
double measure_xi_c_hat(const SimState& state, const GridSpec& grid, double p, double rho_c);

struct AnalyticConfig {
    double chi_hat = 2.5;
    double p = 0.5;
    double d = 4.0;
    bool scan = false;
    std::string out_dir = "out";
};

struct CompareConfig {
    RunConfig base;
    std::vector<double> stiffness_values;
};

// Subcommand drivers. Each writes its CSV artifacts under out_dir (created
// if missing) plus resolved.cfg, and returns 0 on success, 1 on runtime
// failure. Config errors are thrown as ConfigError before any run starts.
int cmd_run(const RunConfig& config);
int cmd_sweep(const SweepConfig& config);
int cmd_converge(const RunConfig& config, const std::vector<int>& cells_list);
int cmd_analytic(const AnalyticConfig& config);
int cmd_compare(const CompareConfig& config);

}  // namespace flks
