#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbf/cli.hpp"

namespace {

// Options shared by every subcommand. Only flags the user actually passed
// end up in the override map, so config file values survive unless
// explicitly overridden.
struct CommonFlags {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> captured;
};

void add_string_option(CLI::App& app, CommonFlags& flags, const std::string& flag,
                       const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(
        flag,
        [&flags, key](const std::string& value) {
            flags.captured.emplace_back(key, value);
        },
        help);
}

void add_common(CLI::App& app, CommonFlags& flags) {
    app.add_option("--config", flags.config_path, "config file with key = value lines")
        ->check(CLI::ExistingFile);
    add_string_option(app, flags, "--output", "output", "output CSV path (default stdout)");
    add_string_option(app, flags, "--residual-tol", "residual_tol",
                      "Newton residual tolerance");
    add_string_option(app, flags, "--step-tol", "step_tol", "Newton step tolerance");
    add_string_option(app, flags, "--max-iterations", "max_iterations",
                      "Newton iteration cap");
    app.add_flag_callback(
        "--no-timestamp",
        [&flags] { flags.captured.emplace_back("timestamp", "false"); },
        "omit the generation timestamp comment");
}

void add_problem(CLI::App& app, CommonFlags& flags) {
    add_string_option(app, flags, "--sigma1", "sigma1", "advection strength");
    add_string_option(app, flags, "--sigma2", "sigma2", "reaction strength");
    add_string_option(app, flags, "--mu", "mu", "diffusion coefficient");
    add_string_option(app, flags, "--delta", "delta", "nonlinearity exponent");
    add_string_option(app, flags, "--eta-min", "eta_min", "left edge of the domain");
    add_string_option(app, flags, "--eta-max", "eta_max", "right edge of the domain");
    add_string_option(app, flags, "--t-final", "t_final", "end of the time interval");
}

int dispatch(gbf::cli::Command command, const CommonFlags& flags) {
    gbf::cli::KeyValues file_values;
    if (!flags.config_path.empty())
        file_values = gbf::cli::parse_config_file(flags.config_path);
    gbf::cli::KeyValues overrides;
    for (const auto& [key, value] : flags.captured) overrides[key] = value;
    const gbf::cli::RunConfig config =
        gbf::cli::build_run_config(command, file_values, overrides);
    return gbf::cli::run(config, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collocation solver for a family of nonlinear advection-"
                 "diffusion-reaction benchmarks"};
    app.require_subcommand(1);

    CommonFlags solve_flags, table_flags, sweep_flags, surface_flags;

    CLI::App* solve = app.add_subcommand(
        "solve", "solve one problem and write the nodal solution");
    add_common(*solve, solve_flags);
    add_problem(*solve, solve_flags);
    add_string_option(*solve, solve_flags, "--order,-N", "order", "grid order");
    add_string_option(*solve, solve_flags, "--report-times", "report_times",
                      "comma-separated times for per-time error lines");

    CLI::App* table = app.add_subcommand(
        "table", "run one of the built-in benchmark tables");
    add_common(*table, table_flags);
    add_string_option(*table, table_flags, "--id", "table", "table number, 1 to 4");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "error versus grid order for one problem");
    add_common(*sweep, sweep_flags);
    add_problem(*sweep, sweep_flags);
    add_string_option(*sweep, sweep_flags, "--orders", "orders",
                      "comma-separated ascending grid orders");

    CLI::App* surface = app.add_subcommand(
        "surface", "sample the solution on a uniform lattice");
    add_common(*surface, surface_flags);
    add_problem(*surface, surface_flags);
    add_string_option(*surface, surface_flags, "--order,-N", "order", "grid order");
    add_string_option(*surface, surface_flags, "--resolution", "resolution",
                      "lattice points per axis");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return dispatch(gbf::cli::Command::solve, solve_flags);
        if (table->parsed()) return dispatch(gbf::cli::Command::table, table_flags);
        if (sweep->parsed()) return dispatch(gbf::cli::Command::sweep, sweep_flags);
        if (surface->parsed()) return dispatch(gbf::cli::Command::surface, surface_flags);
    } catch (const gbf::cli::ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
