#pragma once

#include <cerrno>
#include <chrono>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gbf/analysis.hpp"

namespace gbf::cli {

// Raised for malformed config files or invalid option combinations. The tool
// maps it to exit code 1 with the message on stderr.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

enum class Command { solve, table, sweep, surface };

inline const char* command_name(Command command) {
    switch (command) {
        case Command::solve: return "solve";
        case Command::table: return "table";
        case Command::sweep: return "sweep";
        case Command::surface: return "surface";
    }
    return "?";
}

// Everything a subcommand run needs, merged from defaults, config file, and
// command-line overrides (later sources win key by key).
struct RunConfig {
    Command command = Command::solve;
    ProblemSpec problem;
    int order = 10;
    SolverConfig solver;
    std::vector<double> report_times;  // empty means t_final only
    std::vector<int> sweep_orders;
    int table_id = 0;
    int resolution = 50;
    std::string output_path;  // empty means stdout
    bool timestamp = true;
};

namespace detail {

inline std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

inline std::vector<std::string> split_list(const std::string& key,
                                           const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const std::string item = trim(text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start));
        if (item.empty())
            throw ConfigError("key '" + key + "': empty item in list '" + text + "'");
        items.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

inline double parse_double(const std::string& key, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
        throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a number");
    return value;
}

inline int parse_int(const std::string& key, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const long value = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
        value < INT_MIN || value > INT_MAX)
        throw ConfigError("key '" + key + "': cannot parse '" + text + "' as an integer");
    return static_cast<int>(value);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError("key '" + key + "': expected 'true' or 'false', got '" + text + "'");
}

inline bool is_known_key(const std::string& key) {
    static const std::set<std::string> known = {
        "sigma1",     "sigma2",         "mu",      "delta",        "eta_min",
        "eta_max",    "t_final",        "order",   "report_times", "orders",
        "resolution", "table",          "output",  "timestamp",    "residual_tol",
        "step_tol",   "max_iterations",
    };
    return known.count(key) > 0;
}

inline bool key_applies(Command command, const std::string& key) {
    static const std::set<std::string> common = {"output", "timestamp", "residual_tol",
                                                 "step_tol", "max_iterations"};
    static const std::set<std::string> problem = {"sigma1",  "sigma2",  "mu",     "delta",
                                                  "eta_min", "eta_max", "t_final"};
    if (common.count(key)) return true;
    switch (command) {
        case Command::solve:
            return problem.count(key) || key == "order" || key == "report_times";
        case Command::sweep:
            return problem.count(key) || key == "orders";
        case Command::surface:
            return problem.count(key) || key == "order" || key == "resolution";
        case Command::table:
            return key == "table";
    }
    return false;
}

}  // namespace detail

// Reads a flat "key = value" file. '#' starts a comment, blank lines are
// skipped, keys may not repeat. Errors carry the file name and line number.
inline KeyValues parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    KeyValues values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto where = path + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": missing key before '='");
        if (value.empty())
            throw ConfigError(where + ": missing value for key '" + key + "'");
        if (values.count(key))
            throw ConfigError(where + ": duplicate key '" + key + "'");
        values[key] = value;
    }
    return values;
}

// Merges file values with command-line overrides, applies defaults, and
// validates the result for the given subcommand.
inline RunConfig build_run_config(Command command, const KeyValues& file_values,
                                  const KeyValues& overrides) {
    KeyValues merged = file_values;
    for (const auto& [key, value] : overrides) merged[key] = value;

    for (const auto& [key, value] : merged) {
        if (!detail::is_known_key(key))
            throw ConfigError("unknown key '" + key + "'");
        if (!detail::key_applies(command, key))
            throw ConfigError("key '" + key + "' does not apply to command '" +
                              std::string(command_name(command)) + "'");
    }

    const auto get = [&merged](const char* key) -> std::optional<std::string> {
        const auto it = merged.find(key);
        if (it == merged.end()) return std::nullopt;
        return it->second;
    };
    const auto require = [&](const char* key) -> std::string {
        const auto value = get(key);
        if (!value)
            throw ConfigError("command '" + std::string(command_name(command)) +
                              "' requires key '" + key + "'");
        return *value;
    };

    RunConfig config;
    config.command = command;

    if (command != Command::table) {
        config.problem.sigma1 = detail::parse_double("sigma1", require("sigma1"));
        config.problem.sigma2 = detail::parse_double("sigma2", require("sigma2"));
        config.problem.delta = detail::parse_int("delta", require("delta"));
        config.problem.t_final = detail::parse_double("t_final", require("t_final"));
        if (const auto v = get("mu")) config.problem.mu = detail::parse_double("mu", *v);
        if (const auto v = get("eta_min"))
            config.problem.eta_range.lo = detail::parse_double("eta_min", *v);
        if (const auto v = get("eta_max"))
            config.problem.eta_range.hi = detail::parse_double("eta_max", *v);
        try {
            config.problem.validate();
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
    }

    if (const auto v = get("order")) {
        config.order = detail::parse_int("order", *v);
        if (config.order < 2) throw ConfigError("key 'order': must be at least 2");
    }
    if (const auto v = get("resolution")) {
        config.resolution = detail::parse_int("resolution", *v);
        if (config.resolution < 2)
            throw ConfigError("key 'resolution': must be at least 2");
    }
    if (const auto v = get("residual_tol")) {
        config.solver.residual_tolerance = detail::parse_double("residual_tol", *v);
        if (!(config.solver.residual_tolerance > 0.0))
            throw ConfigError("key 'residual_tol': must be positive");
    }
    if (const auto v = get("step_tol")) {
        config.solver.step_tolerance = detail::parse_double("step_tol", *v);
        if (!(config.solver.step_tolerance > 0.0))
            throw ConfigError("key 'step_tol': must be positive");
    }
    if (const auto v = get("max_iterations")) {
        config.solver.max_iterations = detail::parse_int("max_iterations", *v);
        if (config.solver.max_iterations < 1)
            throw ConfigError("key 'max_iterations': must be at least 1");
    }
    if (const auto v = get("output")) config.output_path = *v;
    if (const auto v = get("timestamp"))
        config.timestamp = detail::parse_bool("timestamp", *v);

    if (const auto v = get("report_times")) {
        for (const std::string& item : detail::split_list("report_times", *v)) {
            const double t = detail::parse_double("report_times", item);
            if (t < 0.0 || t > config.problem.t_final)
                throw ConfigError("key 'report_times': time " + item +
                                  " outside [0, t_final]");
            config.report_times.push_back(t);
        }
    }

    if (command == Command::sweep) {
        for (const std::string& item : detail::split_list("orders", require("orders"))) {
            const int order = detail::parse_int("orders", item);
            if (order < 2) throw ConfigError("key 'orders': orders must be at least 2");
            if (!config.sweep_orders.empty() && order <= config.sweep_orders.back())
                throw ConfigError("key 'orders': orders must be strictly increasing");
            config.sweep_orders.push_back(order);
        }
    }

    if (command == Command::table) {
        config.table_id = detail::parse_int("table", require("table"));
        if (config.table_id < 1 || config.table_id > 4)
            throw ConfigError("key 'table': table id must be between 1 and 4");
    }

    return config;
}

// One benchmark family: a fixed pair of strength parameters swept over
// nonlinearity exponents, report times, and grid orders. Rows are emitted
// with the exponent outermost and the order innermost.
struct TableLayout {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    std::vector<int> deltas;
    std::vector<double> times;
    std::vector<int> orders;
};

inline TableLayout table_layout(int id) {
    switch (id) {
        case 1:
            return {0.1, -0.0025, {1, 2, 4, 8}, {0.1, 0.2, 0.3, 0.4, 0.5}, {4, 6}};
        case 2:
            return {1.0, 1.0, {1, 2, 4, 8}, {0.2, 0.4, 0.6, 0.8, 1.0},
                    {4, 6, 8, 10, 12, 14, 16}};
        case 3:
            return {1.0, 0.0, {1, 2, 4}, {0.001, 0.5, 1.0, 1.5, 2.0, 2.5}, {4, 6, 8, 10}};
        case 4:
            return {1.0, 1.0, {1, 2, 4, 8}, {0.3, 0.9}, {4, 8, 16}};
        default:
            throw ConfigError("table id must be between 1 and 4");
    }
}

namespace detail {

inline std::string format_value(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.16g", value);
    return buffer;
}

// Relative output paths land under GBF_OUTPUT_DIR when it is set, so runs
// can be redirected without touching configs. Parent directories are created
// on demand.
inline std::string resolve_output_path(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path resolved(path);
    if (resolved.is_relative()) {
        if (const char* base = std::getenv("GBF_OUTPUT_DIR"); base && *base)
            resolved = fs::path(base) / resolved;
    }
    if (resolved.has_parent_path()) fs::create_directories(resolved.parent_path());
    return resolved.string();
}

inline void write_timestamp(std::ostream& out) {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    out << "# generated " << buffer << "\n";
}

// Opens the configured destination, defaulting to stdout. The ofstream stays
// alive in the caller's scope through the returned pair.
struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = nullptr;
};

inline OutputTarget open_output(const RunConfig& config) {
    OutputTarget target;
    if (config.output_path.empty()) {
        target.stream = &std::cout;
    } else {
        const std::string resolved = resolve_output_path(config.output_path);
        target.file.open(resolved);
        if (!target.file)
            throw ConfigError("cannot open output file: " + resolved);
        target.stream = &target.file;
    }
    if (config.timestamp) write_timestamp(*target.stream);
    return target;
}

inline ProblemSpec table_cell_problem(const TableLayout& layout, int delta,
                                      double t_report) {
    ProblemSpec spec;
    spec.sigma1 = layout.sigma1;
    spec.sigma2 = layout.sigma2;
    spec.mu = 1.0;
    spec.delta = delta;
    spec.eta_range = {0.0, 1.0};
    spec.t_final = t_report;
    return spec;
}

}  // namespace detail

// Solves once on the configured grid and writes the full nodal solution next
// to the exact one. Returns 2 when the iteration stalls short of tolerance.
inline int run_solve(const RunConfig& config, std::ostream& summary) {
    const BenchmarkSolve run = solve_benchmark(config.problem, config.order, config.solver);
    const std::vector<double> times = config.report_times.empty()
                                          ? std::vector<double>{config.problem.t_final}
                                          : config.report_times;
    const ErrorReport report = linf_error(run.full, config.problem, run.space, run.time, times);

    detail::OutputTarget target = detail::open_output(config);
    std::ostream& out = *target.stream;
    out << "eta,t,u_num,u_exact\n";
    const Interval time_range{0.0, config.problem.t_final};
    for (int i = 0; i <= run.space.order; ++i) {
        const double eta = affine_from_unit(run.space.nodes[i], config.problem.eta_range);
        for (int j = 0; j <= run.time.order; ++j) {
            const double t = affine_from_unit(run.time.nodes[j], time_range);
            out << detail::format_value(eta) << ',' << detail::format_value(t) << ','
                << detail::format_value(run.full.at(i, j)) << ','
                << detail::format_value(exact_solution(config.problem, eta, t)) << "\n";
        }
    }

    summary << "solve: order=" << config.order << " delta=" << config.problem.delta
            << " iterations=" << run.report.iterations
            << " converged=" << (run.report.converged ? "yes" : "no")
            << " linf=" << detail::format_value(report.l_inf) << "\n";
    for (const auto& [t, err] : report.per_time_slice)
        summary << "  t=" << detail::format_value(t)
                << " error=" << detail::format_value(err) << "\n";
    return run.report.converged ? 0 : 2;
}

// Runs every cell of a benchmark table, solving up to each cell's report
// time and recording the error there. Cells that fail to converge print FAIL
// and the run carries on; the exit code stays 0 so partial tables remain
// usable.
inline int run_table(const RunConfig& config, std::ostream& summary) {
    const TableLayout layout = table_layout(config.table_id);
    detail::OutputTarget target = detail::open_output(config);
    std::ostream& out = *target.stream;
    out << "delta,t,N,linf\n";

    int cells = 0;
    int failures = 0;
    double worst = 0.0;
    for (const int delta : layout.deltas) {
        for (const double t_report : layout.times) {
            for (const int order : layout.orders) {
                const ProblemSpec spec =
                    detail::table_cell_problem(layout, delta, t_report);
                ++cells;
                std::string cell = "FAIL";
                try {
                    const BenchmarkSolve run = solve_benchmark(spec, order, config.solver);
                    if (run.report.converged) {
                        const ErrorReport report =
                            linf_error(run.full, spec, run.space, run.time, {t_report});
                        const double err = report.per_time_slice.front().second;
                        if (err > worst) worst = err;
                        cell = detail::format_value(err);
                    } else {
                        ++failures;
                    }
                } catch (const SingularJacobianError&) {
                    ++failures;
                }
                out << delta << ',' << detail::format_value(t_report) << ',' << order
                    << ',' << cell << "\n";
            }
        }
    }
    summary << "table " << config.table_id << ": cells=" << cells
            << " failed=" << failures << " max_linf=" << detail::format_value(worst)
            << "\n";
    return 0;
}

// Solves the same problem across a list of orders and reports the error at
// the final time for each, plus the first-to-last reduction factor.
inline int run_sweep(const RunConfig& config, std::ostream& summary) {
    const std::vector<SweepPoint> points =
        convergence_sweep(config.problem, config.sweep_orders, config.solver);
    detail::OutputTarget target = detail::open_output(config);
    std::ostream& out = *target.stream;
    out << "delta,t,N,linf\n";

    summary << "sweep: delta=" << config.problem.delta
            << " t=" << detail::format_value(config.problem.t_final) << "\n";
    const SweepPoint* first = nullptr;
    const SweepPoint* last = nullptr;
    for (const SweepPoint& point : points) {
        const std::string cell =
            point.converged ? detail::format_value(point.error) : "FAIL";
        out << config.problem.delta << ','
            << detail::format_value(config.problem.t_final) << ',' << point.order << ','
            << cell << "\n";
        summary << "  N=" << point.order << " linf=" << cell << "\n";
        if (point.converged) {
            if (!first) first = &point;
            last = &point;
        }
    }
    if (first && last && first != last && last->error > 0.0)
        summary << "sweep: reduction=" << detail::format_value(first->error / last->error)
                << "\n";
    return 0;
}

// Samples the solved collocation polynomial on a uniform lattice, evaluating
// in time first and then in space with the barycentric formula.
inline int run_surface(const RunConfig& config, std::ostream& summary) {
    const BenchmarkSolve run = solve_benchmark(config.problem, config.order, config.solver);
    detail::OutputTarget target = detail::open_output(config);
    std::ostream& out = *target.stream;
    out << "eta,t,u_num,u_exact\n";

    const int res = config.resolution;
    const int ns = run.space.order;
    const int nt = run.time.order;
    const Interval time_range{0.0, config.problem.t_final};

    // Lattice coordinates in unit variables; the end values are exactly +-1
    // so the edges are exact node hits.
    std::vector<double> coords(res);
    for (int k = 0; k < res; ++k) coords[k] = -1.0 + 2.0 * k / (res - 1);

    Eigen::MatrixXd at_times(ns + 1, res);
    Eigen::VectorXd row(nt + 1);
    for (int i = 0; i <= ns; ++i) {
        for (int j = 0; j <= nt; ++j) row[j] = run.full.at(i, j);
        for (int b = 0; b < res; ++b)
            at_times(i, b) = barycentric_eval(run.time, row, coords[b]);
    }

    double worst = 0.0;
    for (int a = 0; a < res; ++a) {
        const double eta = affine_from_unit(coords[a], config.problem.eta_range);
        for (int b = 0; b < res; ++b) {
            const double t = affine_from_unit(coords[b], time_range);
            const double numeric = barycentric_eval(run.space, at_times.col(b), coords[a]);
            const double exact = exact_solution(config.problem, eta, t);
            const double err = std::abs(numeric - exact);
            if (err > worst) worst = err;
            out << detail::format_value(eta) << ',' << detail::format_value(t) << ','
                << detail::format_value(numeric) << ',' << detail::format_value(exact)
                << "\n";
        }
    }
    summary << "surface: resolution=" << res << " order=" << config.order
            << " converged=" << (run.report.converged ? "yes" : "no")
            << " max_abs_error=" << detail::format_value(worst) << "\n";
    return run.report.converged ? 0 : 2;
}

inline int run(const RunConfig& config, std::ostream& summary) {
    switch (config.command) {
        case Command::solve: return run_solve(config, summary);
        case Command::table: return run_table(config, summary);
        case Command::sweep: return run_sweep(config, summary);
        case Command::surface: return run_surface(config, summary);
    }
    return 1;
}

}  // namespace gbf::cli
