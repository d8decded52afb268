#include "flks/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "flks/analytic.hpp"

namespace fs = std::filesystem;

namespace flks {

namespace {

std::ofstream open_csv(const std::string& dir, const std::string& name,
                       const std::string& header) {
    fs::create_directories(dir);
    std::ofstream out(dir + "/" + name);
    if (!out) throw std::runtime_error("cannot open " + dir + "/" + name);
    out << header << "\n";
    return out;
}

void write_record_row(std::ofstream& out, const OutputRecord& r, bool with_params) {
    if (with_params)
        out << format_double(r.chi_hat) << "," << format_double(r.stiffness) << ",";
    out << r.solution_type << "," << format_double(r.c_star_hat) << ","
        << format_double(r.lambda_star_hat) << "," << format_double(r.c_dispersion_hat) << ","
        << format_double(r.c_min_hat) << "," << format_double(r.rho_max) << "," << r.status
        << "\n";
}

}  // namespace

ClassifyOptions classify_options(const RunConfig& config) {
    ClassifyOptions opts;
    opts.fit_begin = from_hatted_t(config.fit_begin_hat, config.p);
    opts.fit_end = from_hatted_t(config.fit_end_hat, config.p);
    return opts;
}

SimulationResult run_simulation(const RunConfig& config) {
    config.validate();
    SimulationResult result;
    const ModelParams params = config.to_params();
    const GridSpec grid = config.to_grid();
    SimState state = init_state(grid, params.d, config.L0());
    const Integrator integrator(params, grid);
    const auto schedule = SnapshotSchedule::at(config.snapshot_times());
    try {
        result.trajectory = integrator.run(state, config.t_end(), schedule, RunOptions{});
    } catch (const SolverError& err) {
        result.aborted = true;
        result.error = err.what();
        return result;
    }
    result.classified = classify(result.trajectory, params, grid, classify_options(config));
    return result;
}

OutputRecord SimulationResult::record(const RunConfig& config) const {
    OutputRecord r;
    r.chi_hat = config.chi_hat;
    r.stiffness = config.stiffness;
    r.d = config.d;
    r.p = config.p;
    const double p = config.p;
    const auto& m = classified.metrics;
    r.c_star_hat = to_hatted_speed(m.c_star, p);
    r.lambda_star_hat = to_hatted_decay(m.lambda_star, p);
    r.c_dispersion_hat = to_hatted_speed(m.c_dispersion, p);
    r.c_min_hat = to_hatted_speed(m.c_min, p);
    r.rho_max = m.rho_max;
    r.solution_type = classified.label();
    if (aborted) r.status = "aborted";
    else if (!m.steady) r.status = "non-steady";
    else if (!classified.type) r.status = "unclassified";
    return r;
}

double measure_xi_c_hat(const SimState& state, const GridSpec& grid, double p, double rho_c) {
    const int n = grid.cells;
    const int peak =
        static_cast<int>(std::max_element(state.S.begin(), state.S.end()) - state.S.begin());
    double x_S = grid.node(peak);
    if (peak > 0 && peak < n - 1) {
        const double denom = state.S[peak - 1] - 2.0 * state.S[peak] + state.S[peak + 1];
        if (denom < 0.0)
            x_S += 0.5 * (state.S[peak - 1] - state.S[peak + 1]) / denom * grid.dx();
    }
    for (int i = n - 2; i >= peak; --i) {
        if (state.rho[i] >= rho_c && state.rho[i + 1] < rho_c) {
            const double frac = (state.rho[i] - rho_c) / (state.rho[i] - state.rho[i + 1]);
            const double x_c = grid.node(i) + frac * grid.dx();
            return to_hatted_x(x_c - x_S, p);
        }
    }
    throw FrontNotFound("measure_xi_c_hat: rho does not cross rho_c right of the S peak");
}

int cmd_run(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    write_resolved(config, config.out_dir + "/resolved.cfg");

    const SimulationResult result = run_simulation(config);
    const double p = config.p;

    auto trace = open_csv(config.out_dir, "front_trace.csv", "t_hat,x_star_hat");
    for (const auto& [t, x] : result.trajectory.front_trace.samples)
        trace << format_double(to_hatted_t(t, p)) << "," << format_double(to_hatted_x(x, p))
              << "\n";

    const GridSpec grid = config.to_grid();
    for (const auto& [t, snap] : result.trajectory.snapshots) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%g.csv", to_hatted_t(t, p));
        write_snapshot(config.out_dir + "/" + name, snap, grid, p);
    }

    auto metrics = open_csv(config.out_dir, "metrics.csv",
                            "chi_hat,stiffness,solution_type,c_star_hat,lambda_star_hat,"
                            "c_dispersion_hat,c_min_hat,rho_max,status");
    write_record_row(metrics, result.record(config), true);
    return result.aborted ? 1 : 0;
}

int cmd_sweep(const SweepConfig& config) {
    config.validate();
    fs::create_directories(config.base.out_dir);
    write_resolved(config.base, config.base.out_dir + "/resolved.cfg", &config);

    std::vector<RunConfig> runs;
    for (double chi : config.chi_hat_values)
        for (double stiff : config.stiffness_values) {
            RunConfig rc = config.base;
            rc.chi_hat = chi;
            rc.stiffness = stiff;
            runs.push_back(rc);
        }

    std::vector<OutputRecord> records(runs.size());
    unsigned workers = config.max_parallel > 0 ? config.max_parallel
                                               : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, runs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            records[i] = run_simulation(runs[i]).record(runs[i]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    auto out = open_csv(config.base.out_dir, "phase.csv",
                        "chi_hat,stiffness,solution_type,c_star_hat,lambda_star_hat,"
                        "c_dispersion_hat,c_min_hat,rho_max,status");
    for (const auto& r : records) write_record_row(out, r, true);
    return 0;
}

int cmd_converge(const RunConfig& config, const std::vector<int>& cells_list) {
    if (cells_list.size() < 2) throw ConfigError("converge needs at least 2 mesh sizes");
    config.validate();
    fs::create_directories(config.out_dir);
    write_resolved(config, config.out_dir + "/resolved.cfg");

    struct Row {
        int cells;
        double c_hat, lambda_hat, c_disp_hat;
        std::string status;
    };
    std::vector<Row> rows;
    bool failed = false;
    for (int cells : cells_list) {
        RunConfig rc = config;
        rc.cells = cells;
        const SimulationResult result = run_simulation(rc);
        const OutputRecord r = result.record(rc);
        rows.push_back({cells, r.c_star_hat, r.lambda_star_hat, r.c_dispersion_hat, r.status});
        if (result.aborted) failed = true;
    }

    auto out = open_csv(config.out_dir, "converge.csv",
                        "I,c_star,lambda_star,c_of_lambda_star,status");
    for (const auto& r : rows)
        out << r.cells << "," << format_double(r.c_hat) << "," << format_double(r.lambda_hat)
            << "," << format_double(r.c_disp_hat) << "," << r.status << "\n";

    auto pairs = open_csv(config.out_dir, "converge_pairs.csv",
                          "I_coarse,I_fine,rel_dc,rel_dlambda,rel_dispersion_gap_fine");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const Row& c = rows[i - 1];
        const Row& f = rows[i];
        pairs << c.cells << "," << f.cells << ","
              << format_double(std::abs((f.c_hat - c.c_hat) / f.c_hat)) << ","
              << format_double(std::abs((f.lambda_hat - c.lambda_hat) / f.lambda_hat)) << ","
              << format_double(std::abs((f.c_hat - f.c_disp_hat) / f.c_disp_hat)) << "\n";
    }
    return failed ? 1 : 0;
}

int cmd_analytic(const AnalyticConfig& config) {
    if (!(config.chi_hat > 0.0)) throw ConfigError("key 'chi_hat' must be > 0");
    if (!(config.p > 0.0)) throw ConfigError("key 'p' must be > 0");
    if (!(config.d > 0.0)) throw ConfigError("key 'd' must be > 0");
    if (config.out_dir.empty()) throw ConfigError("key 'out_dir' must not be empty");
    const StiffWaveParams params(config.chi_hat, config.p, config.d);
    fs::create_directories(config.out_dir);

    auto root_csv = open_csv(config.out_dir, "analytic_root.csv",
                             "chi_hat,p,d,root_found,xi_c_hat,alpha,f_positive,g_positive,"
                             "sign_changes,checks_passed,checks_total");
    bool found = true;
    XiCRoot root;
    try {
        root = find_xi_c(params);
    } catch (const std::runtime_error&) {
        found = false;
    }
    if (found) {
        const AnalyticProfile profile(params, coefficients(params, root.xi_c_hat));
        const ValidationReport report = validate_solution(profile);
        int passed = 0;
        for (const auto& c : report.checks) passed += c.passed;
        root_csv << format_double(config.chi_hat) << "," << format_double(config.p) << ","
                 << format_double(config.d) << ",1," << format_double(root.xi_c_hat) << ","
                 << format_double(root.alpha) << "," << root.f_positive << ","
                 << root.g_positive << "," << root.sign_changes << "," << passed << ","
                 << report.checks.size() << "\n";

        auto prof_csv = open_csv(config.out_dir, "analytic_profile.csv", "xi_hat,rho");
        for (double xi = -20.0; xi <= root.xi_c_hat + 20.0 + 1e-12; xi += 0.01)
            prof_csv << format_double(xi) << "," << format_double(profile.density(xi)) << "\n";
    } else {
        root_csv << format_double(config.chi_hat) << "," << format_double(config.p) << ","
                 << format_double(config.d) << ",0,nan,nan,0,0,0,0,0\n";
    }

    if (config.scan) {
        auto curve = open_csv(config.out_dir, "f_curve.csv", "chi_hat,xi_c_hat");
        for (double chi = 2.05; chi <= 4.0 + 1e-9; chi += 0.05) {
            try {
                const XiCRoot r = find_xi_c(StiffWaveParams(chi, config.p, config.d));
                curve << format_double(chi) << "," << format_double(r.xi_c_hat) << "\n";
            } catch (const std::runtime_error&) {
                // No root at this modulation; omit the row.
            }
        }

        auto region = open_csv(config.out_dir, "region.csv", "xi_c_hat,p,f,g,alpha");
        for (double xi_c = 0.5; xi_c <= 15.0 + 1e-9; xi_c += 0.25)
            for (double p = 0.05; p <= 0.75 + 1e-9; p += 0.025) {
                const StiffWaveParams sp(config.chi_hat, p, config.d);
                region << format_double(xi_c) << "," << format_double(p) << ","
                       << format_double(constraint_f(sp, xi_c)) << ","
                       << format_double(constraint_g(sp, xi_c)) << ","
                       << format_double(coefficients(sp, xi_c).alpha) << "\n";
            }
    }
    return 0;
}

int cmd_compare(const CompareConfig& config) {
    if (config.stiffness_values.empty())
        throw ConfigError("compare needs a non-empty stiffness list");
    config.base.validate();
    const std::string& dir = config.base.out_dir;
    fs::create_directories(dir);
    write_resolved(config.base, dir + "/resolved.cfg");

    auto out = open_csv(dir, "compare.csv", "stiffness,lambda_over_sqrtp,xi_c_hat,source,status");
    const double p = config.base.p;
    const double rho_c = 1.0 / (1.0 + p);
    bool failed = false;
    for (double stiff : config.stiffness_values) {
        RunConfig rc = config.base;
        rc.stiffness = stiff;
        const SimulationResult result = run_simulation(rc);
        const OutputRecord r = result.record(rc);
        double xi_c = std::nan("");
        if (!result.aborted && !result.trajectory.snapshots.empty()) {
            try {
                xi_c = measure_xi_c_hat(result.trajectory.snapshots.back().second, rc.to_grid(),
                                        p, rho_c);
            } catch (const FrontNotFound&) {
            }
        }
        if (result.aborted) failed = true;
        out << format_double(stiff) << "," << format_double(r.lambda_star_hat) << ","
            << format_double(xi_c) << ",numeric," << r.status << "\n";
    }

    try {
        const StiffWaveParams params(config.base.chi_hat, p, config.base.d);
        const XiCRoot root = find_xi_c(params);
        out << "inf,1," << format_double(root.xi_c_hat) << ",analytic,ok\n";
    } catch (const std::runtime_error&) {
        out << "inf,nan,nan,analytic,no-root\n";
    }
    return failed ? 1 : 0;
}

}  // namespace flks
