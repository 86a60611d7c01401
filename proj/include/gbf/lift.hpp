#pragma once

#include <Eigen/Dense>

#include "gbf/chebyshev.hpp"
#include "gbf/problem.hpp"

namespace gbf {

// Interpolation lift: the unique blend of the three boundary traces, linear
// in each coordinate beyond the traces themselves, that reproduces them on
// the t = -1, eta = -1, and eta = +1 faces of the reference square,
//   Omega(eta, t) = (1-t)/2 h(eta) + (1-eta)/2 g1(t) + (1+eta)/2 g2(t)
//                 - (1-t)(1-eta)/4 g1(-1) - (1-t)(1+eta)/4 g2(-1).
// Subtracting Omega from the solution homogenizes the data.
inline double lift_value(const BoundaryData& data, double eta, double t) {
    return 0.5 * (1.0 - t) * data.initial(eta) + 0.5 * (1.0 - eta) * data.left(t) +
           0.5 * (1.0 + eta) * data.right(t) -
           0.25 * (1.0 - t) * (1.0 - eta) * data.left(-1.0) -
           0.25 * (1.0 - t) * (1.0 + eta) * data.right(-1.0);
}

struct LiftDerivatives {
    double dt = 0.0;       // Omega_t
    double deta = 0.0;     // Omega_eta
    double detaeta = 0.0;  // Omega_etaeta
};

namespace detail {

// Trace derivative samples shared by every lift-derivative evaluation. The
// traces enter through their grid interpolants, so differentiating the
// sampled traces spectrally gives the derivatives the collocation scheme
// actually sees, without asking the caller for closed-form derivatives.
struct TraceDerivatives {
    GridSpec space;
    GridSpec time;
    Eigen::VectorXd initial_slope;  // h'  samples on the space grid
    Eigen::VectorXd initial_curve;  // h'' samples on the space grid
    Eigen::VectorXd left_slope;     // g1' samples on the time grid
    Eigen::VectorXd right_slope;    // g2' samples on the time grid
    double corner_left = 0.0;       // g1(-1)
    double corner_right = 0.0;      // g2(-1)
};

inline TraceDerivatives differentiate_traces(const BoundaryData& data,
                                             const GridSpec& space,
                                             const GridSpec& time) {
    TraceDerivatives traces;
    traces.space = space;
    traces.time = time;
    Eigen::VectorXd initial(space.order + 1);
    Eigen::VectorXd left(time.order + 1);
    Eigen::VectorXd right(time.order + 1);
    for (int i = 0; i <= space.order; ++i) initial[i] = data.initial(space.nodes[i]);
    for (int j = 0; j <= time.order; ++j) {
        left[j] = data.left(time.nodes[j]);
        right[j] = data.right(time.nodes[j]);
    }
    const Eigen::MatrixXd d_space = diff_matrix(space).entries;
    const Eigen::MatrixXd d_time = diff_matrix(time).entries;
    traces.initial_slope = d_space * initial;
    traces.initial_curve = d_space * traces.initial_slope;
    traces.left_slope = d_time * left;
    traces.right_slope = d_time * right;
    traces.corner_left = data.left(-1.0);
    traces.corner_right = data.right(-1.0);
    return traces;
}

inline LiftDerivatives evaluate_lift_derivatives(const BoundaryData& data,
                                                 const TraceDerivatives& traces,
                                                 double eta, double t) {
    LiftDerivatives out;
    out.dt = -0.5 * data.initial(eta) +
             0.5 * (1.0 - eta) * barycentric_eval(traces.time, traces.left_slope, t) +
             0.5 * (1.0 + eta) * barycentric_eval(traces.time, traces.right_slope, t) +
             0.25 * (1.0 - eta) * traces.corner_left +
             0.25 * (1.0 + eta) * traces.corner_right;
    out.deta = 0.5 * (1.0 - t) * barycentric_eval(traces.space, traces.initial_slope, eta) -
               0.5 * data.left(t) + 0.5 * data.right(t) +
               0.25 * (1.0 - t) * (traces.corner_left - traces.corner_right);
    out.detaeta =
        0.5 * (1.0 - t) * barycentric_eval(traces.space, traces.initial_curve, eta);
    return out;
}

}  // namespace detail

// Partial derivatives of the lift at one reference point. Only the initial
// profile contributes to Omega_etaeta; the side traces enter Omega linearly
// in eta.
inline LiftDerivatives lift_derivatives(const BoundaryData& data, const GridSpec& space,
                                        const GridSpec& time, double eta, double t) {
    return detail::evaluate_lift_derivatives(
        data, detail::differentiate_traces(data, space, time), eta, t);
}

// Lift values and derivatives sampled on the interior tensor grid, flattened
// space-major: index r = (i-1) * N_t + (j-1) for space node i = 1..N_s-1 and
// time node j = 1..N_t (both eta faces and the initial face are excluded).
struct LiftField {
    int space_order = 0;
    int time_order = 0;
    Eigen::VectorXd values;   // Omega
    Eigen::VectorXd deta;     // Omega_eta
    Eigen::VectorXd detaeta;  // Omega_etaeta
    Eigen::VectorXd dt;       // Omega_t
};

inline LiftField sample_lift(const BoundaryData& data, const GridSpec& space,
                             const GridSpec& time) {
    const int ns = space.order;
    const int nt = time.order;
    if (ns < 2)
        throw std::invalid_argument("sample_lift: space order must be at least 2");
    LiftField field;
    field.space_order = ns;
    field.time_order = nt;
    const int length = (ns - 1) * nt;
    field.values.resize(length);
    field.deta.resize(length);
    field.detaeta.resize(length);
    field.dt.resize(length);
    const detail::TraceDerivatives traces =
        detail::differentiate_traces(data, space, time);
    int r = 0;
    for (int i = 1; i <= ns - 1; ++i) {
        for (int j = 1; j <= nt; ++j, ++r) {
            const double eta = space.nodes[i];
            const double t = time.nodes[j];
            field.values[r] = lift_value(data, eta, t);
            const LiftDerivatives d =
                detail::evaluate_lift_derivatives(data, traces, eta, t);
            field.deta[r] = d.deta;
            field.detaeta[r] = d.detaeta;
            field.dt[r] = d.dt;
        }
    }
    return field;
}

}  // namespace gbf
