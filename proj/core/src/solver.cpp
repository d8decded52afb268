#include "flks/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "flks/wave.hpp"

namespace flks {

namespace {
constexpr double kSFloor = 1e-300;       // floor before taking log S
constexpr double kNegativityTol = 1e-12; // |rho| below this clamps to 0
}  // namespace

GridSpec::GridSpec(double L, int I, double time_step)
    : length(L), cells(I), dt(time_step) {
    if (!(L > 0.0)) throw std::invalid_argument("GridSpec: length must be > 0");
    if (I < 3) throw std::invalid_argument("GridSpec: need at least 3 cells");
    if (!(time_step > 0.0)) throw std::invalid_argument("GridSpec: dt must be > 0");
}

SnapshotSchedule SnapshotSchedule::at(std::vector<double> ts) {
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1]))
            throw std::invalid_argument("SnapshotSchedule: times must be strictly increasing");
    return SnapshotSchedule{std::move(ts)};
}

SimState init_state(const GridSpec& grid, double d, double L0) {
    if (!(L0 > 0.0 && L0 < grid.length))
        throw std::invalid_argument("init_state: L0 must lie in (0, L)");
    SimState state;
    state.rho.resize(grid.cells);
    for (int i = 0; i < grid.cells; ++i)
        state.rho[i] = grid.node(i) <= L0 ? 1.0 : 0.0;
    state.S = helmholtz_solve(state.rho, d, grid);
    return state;
}

std::vector<double> helmholtz_solve(const std::vector<double>& rho, double d,
                                    const GridSpec& grid) {
    const int n = grid.cells;
    if (static_cast<int>(rho.size()) != n)
        throw std::invalid_argument("helmholtz_solve: rho size does not match grid");
    if (!(d > 0.0)) throw std::invalid_argument("helmholtz_solve: d must be > 0");
    const double k = d / (grid.dx() * grid.dx());

    // Interior rows: -k S_{i-1} + (1+2k) S_i - k S_{i+1} = rho_i.
    // Ghosts S_{-1} = 2 - S_0 and S_I = -S_{I-1} fold into the end rows.
    std::vector<double> c(n), w(n), S(n);
    double diag0 = 1.0 + 3.0 * k;
    c[0] = -k / diag0;
    w[0] = (rho[0] + 2.0 * k) / diag0;
    for (int i = 1; i < n; ++i) {
        if (!std::isfinite(rho[i])) throw SolverError("helmholtz_solve: non-finite rho");
        const double diag = (i == n - 1) ? 1.0 + 3.0 * k : 1.0 + 2.0 * k;
        const double m = diag - (-k) * c[i - 1];
        c[i] = -k / m;
        w[i] = (rho[i] - (-k) * w[i - 1]) / m;
    }
    S[n - 1] = w[n - 1];
    for (int i = n - 2; i >= 0; --i) S[i] = w[i] - c[i] * S[i + 1];
    return S;
}

std::vector<double> convolution_oracle(const std::vector<double>& rho, double d,
                                       const GridSpec& grid) {
    const int n = grid.cells;
    const double sqd = std::sqrt(d);
    const double dx = grid.dx();
    std::vector<double> S(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(rho[j]))
                throw SolverError("convolution_oracle: non-finite rho");
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;  // trapezoid
            acc += w * std::exp(-std::abs(grid.node(i) - grid.node(j)) / sqd) * rho[j];
        }
        S[i] = acc * dx / (2.0 * sqd);
    }
    return S;
}

Integrator::Integrator(ModelParams params, GridSpec grid)
    : params_(std::move(params)), grid_(grid) {
    const double dtp = grid_.dt * params_.growth.p;
    if (!(dtp < 1.0))
        throw std::invalid_argument("Integrator: dt*p must be < 1 for the semi-implicit reaction");
    log_S_.resize(grid_.cells);
    face_flux_.resize(grid_.cells + 1);
    rho_next_.resize(grid_.cells);
}

void Integrator::solve_S(const std::vector<double>& rho, std::vector<double>& S) const {
    S = helmholtz_solve(rho, params_.d, grid_);
    for (double v : S)
        if (v < 0.0) throw SolverError("positivity lost: negative S from tridiagonal solve");
}

void Integrator::step(SimState& state) const {
    const int n = grid_.cells;
    const double dx = grid_.dx();
    const double dt = grid_.dt;
    const auto& rho = state.rho;
    const auto& S = state.S;

    for (int i = 0; i < n; ++i) {
        if (S[i] <= 0.0 && S[i] < kSFloor && !(S[i] >= 0.0))
            throw SolverError("positivity lost: S <= 0 at step " + std::to_string(state.step));
        log_S_[i] = std::log(std::max(S[i], kSFloor));
    }

    // Face i sits between cells i-1 and i; U_i uses the backward log S
    // difference. The face density at the right wall is identically zero
    // (ghost rho_I = -rho_{I-1}), so that face carries no flux.
    const double ghost_left_S = std::max(2.0 - S[0], kSFloor);
    face_flux_[0] =
        params_.flux.velocity((log_S_[0] - std::log(ghost_left_S)) / dx) *
        0.5 * (rho[0] + (2.0 - rho[0]));
    for (int i = 1; i < n; ++i) {
        const double U = params_.flux.velocity((log_S_[i] - log_S_[i - 1]) / dx);
        face_flux_[i] = U * 0.5 * (rho[i] + rho[i - 1]);
    }
    face_flux_[n] = 0.0;

    const double inv_dx = 1.0 / dx;
    const double inv_dx2 = 1.0 / (dx * dx);
    const double t_now = state.time;
    for (int i = 0; i < n; ++i) {
        const double left = (i == 0) ? 2.0 - rho[0] : rho[i - 1];
        const double right = (i == n - 1) ? -rho[n - 1] : rho[i + 1];
        const double adv = (face_flux_[i + 1] - face_flux_[i]) * inv_dx;
        const double diff = (right - 2.0 * rho[i] + left) * inv_dx2;
        double numer = rho[i] + dt * (diff - adv);
        if (forcing_) numer += dt * forcing_(grid_.node(i), t_now);
        double v = numer / (1.0 - dt * params_.growth.rate(rho[i]));
        if (!(v >= 0.0)) {
            if (v >= -kNegativityTol) {
                v = 0.0;
            } else {
                throw SolverError("positivity lost: rho_" + std::to_string(i) + " = " +
                                  std::to_string(v) + " at step " + std::to_string(state.step));
            }
        }
        if (!std::isfinite(v))
            throw SolverError("non-finite rho at step " + std::to_string(state.step));
        rho_next_[i] = v;
    }

    state.rho.swap(rho_next_);
    solve_S(state.rho, state.S);
    state.time += dt;
    state.step += 1;
}

Trajectory Integrator::run(SimState& state, double t_end, const SnapshotSchedule& schedule,
                           const RunOptions& options) const {
    if (!(t_end >= state.time))
        throw std::invalid_argument("run: t_end must not precede the current time");
    Trajectory traj;
    traj.front_trace.threshold = options.front_threshold;
    for (double ts : schedule.times)
        if (ts > t_end + 0.5 * grid_.dt)
            throw std::invalid_argument("run: snapshot time beyond t_end");

    const auto t_start = std::chrono::steady_clock::now();
    const double guard = options.wall_guard_cells * grid_.dx();
    std::size_t next_snapshot = 0;
    while (next_snapshot < schedule.times.size() &&
           schedule.times[next_snapshot] < state.time - 0.5 * grid_.dt)
        ++next_snapshot;

    const auto sample = [&]() {
        if (!options.record_trace) return true;
        try {
            const double x_star = front_position(state, grid_, options.front_threshold);
            traj.front_trace.samples.emplace_back(state.time, x_star);
            if (x_star < guard || x_star > grid_.length - guard) {
                traj.truncated = true;
                traj.warning = "front reached wall guard";
                return false;
            }
        } catch (const FrontNotFound&) {
            // Front outside the resolvable range; skip this sample.
        }
        return true;
    };

    const long n_steps = std::lround((t_end - state.time) / grid_.dt);
    for (long s = 0;; ++s) {
        if (next_snapshot < schedule.times.size() &&
            state.time >= schedule.times[next_snapshot] - 0.5 * grid_.dt) {
            traj.snapshots.emplace_back(state.time, state);
            ++next_snapshot;
        }
        if (s % options.sample_interval == 0 && !sample()) break;
        if (s >= n_steps) break;
        if (options.max_seconds > 0.0) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t_start;
            if (elapsed.count() > options.max_seconds) {
                traj.truncated = true;
                traj.warning = "wall-clock budget exceeded";
                break;
            }
        }
        step(state);
    }
    return traj;
}

SimState step_once(const SimState& state, const ModelParams& params, const GridSpec& grid) {
    SimState next = state;
    Integrator(params, grid).step(next);
    return next;
}

void write_snapshot(const std::string& path, const SimState& state,
                    const GridSpec& grid, double p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    char buf[96];
    std::snprintf(buf, sizeof buf, "# t_hat=%.17g\n", to_hatted_t(state.time, p));
    out << buf;
    for (int i = 0; i < grid.cells; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n",
                      to_hatted_x(grid.node(i), p), state.rho[i], state.S[i]);
        out << buf;
    }
}

}  // namespace flks
