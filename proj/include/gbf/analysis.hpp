#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gbf/newton.hpp"

namespace gbf {

// Maximum-norm comparison against the exact solution: the grid-wide maximum
// over interior nodes plus a per-time breakdown at requested physical times.
struct ErrorReport {
    double l_inf = 0.0;
    std::vector<std::pair<double, double>> per_time_slice;  // (time, slice max)
    int order = 0;
    int delta = 0;
};

// Errors are measured at the interior spatial nodes. Off-grid report times
// are handled by barycentric evaluation of the discrete solution in time,
// which is exact for the collocation polynomial and returns nodal values
// unchanged when the time lands on a grid node.
inline ErrorReport linf_error(const SolutionField& full_u, const ProblemSpec& spec,
                              const GridSpec& space, const GridSpec& time,
                              const std::vector<double>& report_times) {
    const int ns = space.order;
    const int nt = time.order;
    if (full_u.space_count != ns + 1 || full_u.time_count != nt + 1)
        throw std::invalid_argument("linf_error: field does not match grids");
    const Interval time_range{0.0, spec.t_final};

    ErrorReport report;
    report.order = ns;
    report.delta = spec.delta;
    for (int i = 1; i <= ns - 1; ++i) {
        const double eta_physical = affine_from_unit(space.nodes[i], spec.eta_range);
        for (int j = 1; j <= nt; ++j) {
            const double t_physical = affine_from_unit(time.nodes[j], time_range);
            const double err =
                std::abs(full_u.at(i, j) - exact_solution(spec, eta_physical, t_physical));
            if (err > report.l_inf) report.l_inf = err;
        }
    }
    for (const double t_physical : report_times) {
        const double t_unit = affine_to_unit(t_physical, time_range);
        double slice = 0.0;
        Eigen::VectorXd row(nt + 1);
        for (int i = 1; i <= ns - 1; ++i) {
            for (int j = 0; j <= nt; ++j) row[j] = full_u.at(i, j);
            const double numeric = barycentric_eval(time, row, t_unit);
            const double eta_physical = affine_from_unit(space.nodes[i], spec.eta_range);
            const double err =
                std::abs(numeric - exact_solution(spec, eta_physical, t_physical));
            if (err > slice) slice = err;
        }
        report.per_time_slice.emplace_back(t_physical, slice);
    }
    return report;
}

// One point of a convergence sweep. A cell that fails to converge keeps its
// error but is flagged, so callers can report it without aborting the sweep.
struct SweepPoint {
    int order = 0;
    double error = 0.0;
    bool converged = false;
};

// Solves the problem once per order over [0, t_final] and reports the error
// at the final time, the reading under which the benchmark error sequences
// decay spectrally all the way to the round-off floor.
inline std::vector<SweepPoint> convergence_sweep(const ProblemSpec& spec,
                                                 const std::vector<int>& orders,
                                                 const SolverConfig& config = {}) {
    std::vector<SweepPoint> points;
    points.reserve(orders.size());
    for (const int order : orders) {
        SweepPoint point;
        point.order = order;
        try {
            const BenchmarkSolve run = solve_benchmark(spec, order, config);
            const ErrorReport report =
                linf_error(run.full, spec, run.space, run.time, {spec.t_final});
            point.error = report.per_time_slice.front().second;
            point.converged = run.report.converged;
        } catch (const SingularJacobianError&) {
            point.error = std::numeric_limits<double>::quiet_NaN();
            point.converged = false;
        }
        points.push_back(point);
    }
    return points;
}

// Discrete energy of the full-grid solution per time node, against the
// exponential growth certificate seeded by the initial energy. Both sides
// use the reaction coefficient of the mapped equation, so the exponent is
// invariant under the time rescaling.
struct EnergyTrace {
    std::vector<double> times;   // physical
    std::vector<double> energy;  // quadrature-weighted squared solution
    std::vector<double> bound;   // exp(2 reaction (t_j - t_0)) * energy[0]
    bool within_bound = false;
};

inline EnergyTrace energy_check(const SolutionField& full_u,
                                const TransformedCoefficients& coeffs,
                                const GridSpec& space, const GridSpec& time,
                                double t_final) {
    const int ns = space.order;
    const int nt = time.order;
    if (full_u.space_count != ns + 1 || full_u.time_count != nt + 1)
        throw std::invalid_argument("energy_check: field does not match grids");
    const Interval time_range{0.0, t_final};
    EnergyTrace trace;
    trace.within_bound = true;
    for (int j = 0; j <= nt; ++j) {
        double energy = 0.0;
        for (int i = 0; i <= ns; ++i)
            energy += full_u.at(i, j) * full_u.at(i, j) * space.quad_weights[i];
        trace.times.push_back(affine_from_unit(time.nodes[j], time_range));
        trace.energy.push_back(energy);
    }
    for (int j = 0; j <= nt; ++j) {
        const double bound =
            std::exp(2.0 * coeffs.reaction * (time.nodes[j] - time.nodes[0])) *
            trace.energy.front();
        trace.bound.push_back(bound);
        if (trace.energy[j] > bound * (1.0 + 1e-8)) trace.within_bound = false;
    }
    return trace;
}

}  // namespace gbf
