#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flks/commands.hpp"

namespace {

struct CommonFlags {
    std::string config_file;
    std::string preset;
    double chi_hat = 0, stiffness = 0, d = 0, p = 0, L_hat = 0, L0_hat = 0, t_end = 0;
    int cells = 0;
    std::string out;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_file, "Config file (key = value lines)");
    sub->add_option("--preset", f.preset, "Named preset: paper or coarse")
        ->check(CLI::IsMember({"paper", "coarse"}));
    sub->add_option("--chi-hat", f.chi_hat, "Normalized modulation amplitude");
    sub->add_option("--stiffness", f.stiffness, "Drift response slope at zero gradient");
    sub->add_option("--d", f.d, "Chemoattractant diffusion coefficient");
    sub->add_option("--p", f.p, "Growth rate");
    sub->add_option("--L-hat", f.L_hat, "Domain length (hatted)");
    sub->add_option("--cells", f.cells, "Number of mesh cells");
    sub->add_option("--L0-hat", f.L0_hat, "Initial plateau length (hatted)");
    sub->add_option("--t-end", f.t_end, "End time (hatted)");
    sub->add_option("--out", f.out, "Output directory");
}

// defaults < preset < file < flags
void resolve(const CLI::App* sub, const CommonFlags& f, flks::RunConfig& config,
             flks::SweepConfig* sweep = nullptr) {
    if (!f.preset.empty()) flks::apply_preset(config, f.preset);
    if (!f.config_file.empty()) flks::load_config_file(f.config_file, config, sweep);
    if (sub->count("--chi-hat")) config.chi_hat = f.chi_hat;
    if (sub->count("--stiffness")) config.stiffness = f.stiffness;
    if (sub->count("--d")) config.d = f.d;
    if (sub->count("--p")) config.p = f.p;
    if (sub->count("--L-hat")) config.L_hat = f.L_hat;
    if (sub->count("--cells")) config.cells = f.cells;
    if (sub->count("--L0-hat")) config.L0_hat = f.L0_hat;
    if (sub->count("--t-end")) config.t_end_hat = f.t_end;
    if (sub->count("--out")) config.out_dir = f.out;
    config.validate();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for a 1D flux-limited chemotaxis model with logistic growth"};
    app.require_subcommand(1);

    CommonFlags run_flags, sweep_flags, conv_flags, comp_flags;

    CLI::App* run = app.add_subcommand("run", "Single simulation with classification");
    add_common(run, run_flags);

    CLI::App* sweep = app.add_subcommand("sweep", "Phase-diagram sweep over (chi_hat, stiffness)");
    add_common(sweep, sweep_flags);
    std::vector<double> chi_values, stiffness_values;
    int max_parallel = 0;
    sweep->add_option("--chi-hat-values", chi_values, "Modulation grid")->delimiter(',');
    sweep->add_option("--stiffness-values", stiffness_values, "Stiffness grid")->delimiter(',');
    sweep->add_option("--max-parallel", max_parallel, "Worker cap (0 = all cores)");

    CLI::App* conv = app.add_subcommand("converge", "Mesh-refinement study");
    add_common(conv, conv_flags);
    std::vector<int> cells_list{5000, 10000, 20000};
    conv->add_option("--cells-list", cells_list, "Mesh sizes, coarse to fine")->delimiter(',');

    CLI::App* analytic = app.add_subcommand("analytic", "Stiff-limit analytic wave");
    flks::AnalyticConfig acfg;
    analytic->add_option("--chi-hat", acfg.chi_hat, "Normalized modulation amplitude");
    analytic->add_option("--p", acfg.p, "Growth rate");
    analytic->add_option("--d", acfg.d, "Chemoattractant diffusion coefficient");
    analytic->add_flag("--scan", acfg.scan, "Also write the modulation scan and constraint region");
    analytic->add_option("--out", acfg.out_dir, "Output directory");

    CLI::App* compare = app.add_subcommand("compare", "Numeric fronts vs the analytic wave");
    add_common(compare, comp_flags);
    std::vector<double> compare_stiffness{7.0, 8.0, 9.0, 10.0};
    compare->add_option("--stiffness-list", compare_stiffness, "Stiffness values to simulate")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) {
            flks::RunConfig config;
            resolve(run, run_flags, config);
            return flks::cmd_run(config);
        }
        if (*sweep) {
            flks::SweepConfig config;
            resolve(sweep, sweep_flags, config.base, &config);
            if (sweep->count("--chi-hat-values")) config.chi_hat_values = chi_values;
            if (sweep->count("--stiffness-values")) config.stiffness_values = stiffness_values;
            if (sweep->count("--max-parallel")) config.max_parallel = max_parallel;
            config.validate();
            return flks::cmd_sweep(config);
        }
        if (*conv) {
            flks::RunConfig config;
            resolve(conv, conv_flags, config);
            return flks::cmd_converge(config, cells_list);
        }
        if (*analytic) {
            return flks::cmd_analytic(acfg);
        }
        if (*compare) {
            flks::CompareConfig config;
            resolve(compare, comp_flags, config.base);
            config.stiffness_values = compare_stiffness;
            return flks::cmd_compare(config);
        }
    } catch (const flks::ConfigError& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
