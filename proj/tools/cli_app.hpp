#pragma once

// Argument parsing for the `tabla` tool. Kept separate from main() so the
// grammar can be exercised in-process by the test suite.

#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tabla/commands.hpp"

namespace tabla::cli {

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eigenmodes and overtone ratios of radially loaded circular membranes", "tabla"};
    app.set_config("--config", "", "INI/TOML file with option defaults (flags override it)");
    app.require_subcommand(1);

    RunConfig cfg;
    std::string base = cfg.base;

    auto add_profile = [&](CLI::App* sub) {
        sub->add_option("--profile", cfg.profile, "Built-in name (uniform, default-rings, default-continuous) or profile file")
            ->capture_default_str();
    };
    auto add_numerics = [&](CLI::App* sub) {
        sub->add_option("--order", cfg.order, "Runge-Kutta order (2 or 4)")->capture_default_str();
        sub->add_option("--step", cfg.step, "Integration step, as a fraction of the radius")->capture_default_str();
        sub->add_option("--rstart", cfg.r_start, "Start radius, as a fraction of the radius")->capture_default_str();
        sub->add_option("--kmin", cfg.kappa_min, "Scan start (kappa = k' a)")->capture_default_str();
        sub->add_option("--kmax", cfg.kappa_max, "Scan end")->capture_default_str();
        sub->add_option("--dk", cfg.kappa_step, "Scan step")->capture_default_str();
    };
    auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", cfg.output, "Output file (default stdout)"); };

    auto* spectrum = app.add_subcommand("spectrum", "Solve the eigenvalue spectrum and print a ratio table");
    add_profile(spectrum);
    add_numerics(spectrum);
    add_output(spectrum);
    spectrum->add_option("--mmax", cfg.m_max, "Largest number of nodal diameters")->capture_default_str();
    spectrum->add_option("--cmax", cfg.c_max, "Largest number of interior nodal circles")->capture_default_str();
    spectrum->add_option("--base", base, "Base mode m,c for normalisation")->capture_default_str();
    spectrum->add_option("--base-value", cfg.base_value, "Ratio assigned to the base mode")->capture_default_str();
    spectrum->add_option("--format", cfg.format, "text, csv or json")->capture_default_str();

    auto* trajectory = app.add_subcommand("trajectory", "Integrate once and write r,R,dR as CSV");
    add_profile(trajectory);
    add_numerics(trajectory);
    add_output(trajectory);
    trajectory->add_option("--m", cfg.m, "Number of nodal diameters")->capture_default_str();
    trajectory->add_option("--kprime", cfg.kprime, "Trial k'")->required();

    auto* report = app.add_subcommand("report", "Compare computed ratios with the tabulated reference values");
    add_numerics(report);
    add_output(report);
    report->add_option("--fundamental", cfg.fundamental_hz, "Fundamental frequency for audibility, Hz")
        ->capture_default_str();

    auto* tune = app.add_subcommand("tune", "Fit profile parameters to integer overtone ratios");
    add_output(tune);
    tune->add_option("--spec", cfg.tune_spec, "Tune specification file");
    tune->add_option("--template", cfg.tune_template, "continuous or rings (without --spec)")->capture_default_str();
    tune->add_option("--budget", cfg.budget, "Objective evaluations (without --spec)")->capture_default_str();
    tune->add_option("--seed", cfg.seed, "Seed (without --spec)")->capture_default_str();
    tune->add_option("--trace", cfg.trace_output, "Write the evaluation trace as CSV");

    auto* dump = app.add_subcommand("profile-dump", "Sample rho(r) on an even grid");
    add_profile(dump);
    add_output(dump);
    dump->add_option("--count", cfg.count, "Number of samples")->capture_default_str();
    dump->add_option("--format", cfg.format, "text, csv or json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::ConfigError);
    }
    cfg.base = base;
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    return static_cast<int>(run_command(cfg, out, err));
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"tabla"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tabla::cli
