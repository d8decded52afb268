#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "flks/grid.hpp"
#include "flks/model.hpp"

namespace flks {

/// Fatal integration failure (positivity loss, non-finite fields, ...).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Step initial condition: rho = 1 on cells with left node x_i <= L0,
/// 0 elsewhere; S solved from the discrete Helmholtz system.
SimState init_state(const GridSpec& grid, double d, double L0);

/// Direct tridiagonal solve of -d*(S_{i-1}-2S_i+S_{i+1})/dx^2 + S_i = rho_i
/// with ghost values S_{-1} = 2 - S_0 and S_I = -S_{I-1}.
std::vector<double> helmholtz_solve(const std::vector<double>& rho, double d,
                                    const GridSpec& grid);

/// Free-space Green-kernel quadrature S(x) = (1/2 sqrt(d)) int e^{-|x-y|/sqrt(d)} rho(y) dy.
/// Cross-check oracle for helmholtz_solve; valid for rho supported away
/// from the boundaries.
std::vector<double> convolution_oracle(const std::vector<double>& rho, double d,
                                       const GridSpec& grid);

struct RunOptions {
    double front_threshold = 1e-20;
    int sample_interval = 100;     // front-trace sampling period in steps
    int wall_guard_cells = 50;     // abort if the front comes this close to a wall
    double max_seconds = 0.0;      // wall-clock budget; 0 disables
    bool record_trace = true;
};

/// Explicit advection/diffusion step with semi-implicit reaction and an
/// implicit tridiagonal solve for S. Owns the scratch storage so repeated
/// stepping does not allocate.
class Integrator {
public:
    using Forcing = std::function<double(double x, double t)>;

    Integrator(ModelParams params, GridSpec grid);

    /// One time step in place. S is re-solved from the updated rho so the
    /// state stays consistent. `forcing`, when set, adds dt*f(x_i, t_n) to
    /// the density update (used by manufactured-solution tests).
    void step(SimState& state) const;

    /// Integrate to t_end, recording snapshots at the scheduled times and
    /// the front trace every sample_interval steps. Wall-clock overrun and
    /// the wall-proximity guard return a partial trajectory with a warning;
    /// step failures propagate as SolverError.
    Trajectory run(SimState& state, double t_end, const SnapshotSchedule& schedule,
                   const RunOptions& options = {}) const;

    const ModelParams& params() const { return params_; }
    const GridSpec& grid() const { return grid_; }

    void set_forcing(Forcing f) { forcing_ = std::move(f); }

private:
    ModelParams params_;
    GridSpec grid_;
    Forcing forcing_;
    mutable std::vector<double> log_S_, face_flux_, rho_next_;

    void solve_S(const std::vector<double>& rho, std::vector<double>& S) const;
};

/// Stand-alone step (convenience wrapper for tests).
SimState step_once(const SimState& state, const ModelParams& params, const GridSpec& grid);

// Snapshot file: "# t_hat=<float>" then one "x_hat,rho,S" line per cell,
// 17 significant digits. x_hat/t_hat conversion uses the growth rate p.
void write_snapshot(const std::string& path, const SimState& state,
                    const GridSpec& grid, double p);

}  // namespace flks
