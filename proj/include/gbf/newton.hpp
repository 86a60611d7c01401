#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gbf/assembly.hpp"

namespace gbf {

// Nodal values on a tensor grid, flattened space-major.
struct SolutionField {
    int space_count = 0;
    int time_count = 0;
    Eigen::VectorXd values;

    double& at(int i, int j) { return values[i * time_count + j]; }
    double at(int i, int j) const { return values[i * time_count + j]; }
};

struct SolverConfig {
    double residual_tolerance = 1e-13;  // infinity norm of G
    double step_tolerance = 1e-14;      // infinity norm of the damped step
    int max_iterations = 50;
    double damping_factor = 0.5;
    int max_backtracks = 20;
};

struct NewtonReport {
    int iterations = 0;
    std::vector<double> residual_norms;  // length iterations + 1, starts at G(0)
    bool converged = false;
    double final_residual = 0.0;
};

struct SingularJacobianError : std::runtime_error {
    int iteration;
    explicit SingularJacobianError(int it)
        : std::runtime_error("newton: singular Jacobian at iteration " +
                             std::to_string(it)),
          iteration(it) {}
};

// Damped Newton iteration on G(V) = 0 from V = 0. Full steps are halved
// until the residual norm decreases. The loop keeps polishing past the
// convergence tolerance until steps stop mattering or no decrease is
// possible; the extra iteration or two costs one factorization each and
// carries the residual to its round-off floor, which the benchmark error
// levels need. Convergence is judged against the tolerance at exit.
inline std::pair<SolutionField, NewtonReport> solve(const ResidualSystem& system,
                                                    const SolverConfig& config = {}) {
    if (config.residual_tolerance <= 0.0 || config.step_tolerance <= 0.0 ||
        config.max_iterations < 1)
        throw std::invalid_argument("solve: invalid solver configuration");
    const int ns = system.operators.space_order;
    const int nt = system.operators.time_order;
    Eigen::VectorXd v = Eigen::VectorXd::Zero((ns - 1) * nt);
    Eigen::VectorXd g = residual(system, v);
    double norm = g.lpNorm<Eigen::Infinity>();
    NewtonReport report;
    report.residual_norms.push_back(norm);

    if (norm > config.residual_tolerance) {
        for (int it = 0; it < config.max_iterations; ++it) {
            const Eigen::MatrixXd j = jacobian(system, v);
            const Eigen::PartialPivLU<Eigen::MatrixXd> lu(j);
            const double pivot_floor =
                1e-14 * j.cwiseAbs().rowwise().sum().maxCoeff();
            if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= pivot_floor)
                throw SingularJacobianError(it);
            const Eigen::VectorXd step = lu.solve(g);

            double scale = 1.0;
            bool improved = false;
            Eigen::VectorXd v_next;
            Eigen::VectorXd g_next;
            double norm_next = norm;
            for (int cut = 0; cut <= config.max_backtracks; ++cut) {
                v_next = v - scale * step;
                g_next = residual(system, v_next);
                norm_next = g_next.lpNorm<Eigen::Infinity>();
                if (norm_next < norm) {
                    improved = true;
                    break;
                }
                scale *= config.damping_factor;
            }
            if (!improved) break;
            v = std::move(v_next);
            g = std::move(g_next);
            norm = norm_next;
            report.residual_norms.push_back(norm);
            if (scale * step.lpNorm<Eigen::Infinity>() <= config.step_tolerance) break;
        }
    }
    report.iterations = static_cast<int>(report.residual_norms.size()) - 1;
    report.final_residual = norm;
    report.converged = norm <= config.residual_tolerance;
    SolutionField field{ns - 1, nt, std::move(v)};
    return {std::move(field), std::move(report)};
}

// Full-grid solution: interior values are V + Omega; the faces carry the
// data traces directly (the lift reproduces them there anyway, this just
// avoids re-deriving known values). The initial face owns the corners.
inline SolutionField reconstruct(const SolutionField& v, const LiftField& lift,
                                 const BoundaryData& data, const GridSpec& space,
                                 const GridSpec& time) {
    const int ns = space.order;
    const int nt = time.order;
    if (v.space_count != ns - 1 || v.time_count != nt ||
        lift.space_order != ns || lift.time_order != nt)
        throw std::invalid_argument("reconstruct: dimensions disagree");
    SolutionField u{ns + 1, nt + 1, Eigen::VectorXd((ns + 1) * (nt + 1))};
    for (int i = 0; i <= ns; ++i) u.at(i, 0) = data.initial(space.nodes[i]);
    for (int j = 1; j <= nt; ++j) {
        u.at(0, j) = data.left(time.nodes[j]);
        u.at(ns, j) = data.right(time.nodes[j]);
    }
    for (int i = 1; i <= ns - 1; ++i)
        for (int j = 1; j <= nt; ++j)
            u.at(i, j) = v.at(i - 1, j - 1) + lift.values[(i - 1) * nt + (j - 1)];
    return u;
}

// One end-to-end benchmark solve against the traveling-wave data at a single
// order (the same order on both axes).
struct BenchmarkSolve {
    GridSpec space;
    GridSpec time;
    BoundaryData data;
    LiftField lift;
    ResidualSystem system;
    SolutionField interior;
    SolutionField full;
    NewtonReport report;
};

inline BenchmarkSolve solve_benchmark(const ProblemSpec& spec, int order,
                                      const SolverConfig& config = {}) {
    BenchmarkSolve run;
    run.space = cgl_grid(order);
    run.time = cgl_grid(order);
    run.data = benchmark_boundary_data(spec);
    run.lift = sample_lift(run.data, run.space, run.time);
    run.system = make_residual_system(build_operators(run.space, run.time), run.lift,
                                      transformed_coefficients(spec), spec.delta);
    auto [field, report] = solve(run.system, config);
    run.interior = std::move(field);
    run.report = std::move(report);
    run.full = reconstruct(run.interior, run.lift, run.data, run.space, run.time);
    return run;
}

}  // namespace gbf
