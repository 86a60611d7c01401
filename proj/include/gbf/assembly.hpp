#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "gbf/chebyshev.hpp"
#include "gbf/lift.hpp"
#include "gbf/problem.hpp"

namespace gbf {

namespace detail {

inline Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace detail

// Elementwise integer power by repeated multiplication, with x^0 = 1 for
// every entry (the expansion terms rely on 0^0 = 1 when V vanishes).
inline Eigen::VectorXd elementwise_power(const Eigen::VectorXd& v, int exponent) {
    if (exponent < 0)
        throw std::invalid_argument("elementwise_power: exponent must be nonnegative");
    Eigen::VectorXd out = Eigen::VectorXd::Ones(v.size());
    for (int k = 0; k < exponent; ++k) out.array() *= v.array();
    return out;
}

// Binomial coefficient, exact in double for the small orders used here.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

// Collocation derivative operators restricted to the interior unknown and
// flattened space-major. The restriction drops both eta faces and the
// initial time face; it is exact because the homogenized unknown vanishes
// there, so the dropped columns multiply zeros.
struct OperatorSet {
    int space_order = 0;
    int time_order = 0;
    Eigen::MatrixXd time_derivative;  // I_(Ns-1) (x) Dt
    Eigen::MatrixXd space_first;      // De (x) I_Nt
    Eigen::MatrixXd space_second;     // De2 (x) I_Nt
};

inline OperatorSet build_operators(const GridSpec& space, const GridSpec& time) {
    const int ns = space.order;
    const int nt = time.order;
    if (ns < 2)
        throw std::invalid_argument("build_operators: space order must be at least 2");
    const Eigen::MatrixXd d_space = diff_matrix(space).entries;
    const Eigen::MatrixXd d_space2 = second_diff_matrix(space).entries;
    const Eigen::MatrixXd d_time = diff_matrix(time).entries;
    OperatorSet ops;
    ops.space_order = ns;
    ops.time_order = nt;
    ops.time_derivative =
        detail::kronecker(Eigen::MatrixXd::Identity(ns - 1, ns - 1),
                          d_time.block(1, 1, nt, nt));
    ops.space_first = detail::kronecker(d_space.block(1, 1, ns - 1, ns - 1),
                                        Eigen::MatrixXd::Identity(nt, nt));
    ops.space_second = detail::kronecker(d_space2.block(1, 1, ns - 1, ns - 1),
                                         Eigen::MatrixXd::Identity(nt, nt));
    return ops;
}

// Everything needed to evaluate the homogenized collocation residual G(V)
// and its Jacobian. The forcing vector collects every V-independent term of
// the expansion, so G(0) equals forcing identically.
struct ResidualSystem {
    OperatorSet operators;
    LiftField lift;
    TransformedCoefficients coeffs;
    int delta = 1;
    Eigen::VectorXd forcing;
};

inline ResidualSystem make_residual_system(const OperatorSet& operators,
                                           const LiftField& lift,
                                           const TransformedCoefficients& coeffs,
                                           int delta) {
    if (delta < 1)
        throw std::invalid_argument("make_residual_system: delta must be positive");
    if (lift.space_order != operators.space_order ||
        lift.time_order != operators.time_order)
        throw std::invalid_argument("make_residual_system: lift and operators disagree");
    ResidualSystem system{operators, lift, coeffs, delta, {}};
    const Eigen::VectorXd lift_power = elementwise_power(lift.values, delta);
    system.forcing =
        lift.dt +
        (delta + 1) * coeffs.advection *
            (lift_power.array() * lift.deta.array()).matrix() -
        coeffs.diffusion * lift.detaeta - coeffs.reaction * lift.values +
        coeffs.reaction * elementwise_power(lift.values, delta + 1);
    return system;
}

// Residual of the collocated equation in the homogenized unknown. The
// nonlinear power (V + Omega)^(delta+1) is expanded binomially around the
// lift; each term keeps the lift factors as fixed diagonal data and applies
// the derivative operators to the remaining power of V.
inline Eigen::VectorXd residual(const ResidualSystem& system, const Eigen::VectorXd& v) {
    const OperatorSet& ops = system.operators;
    const int length = (ops.space_order - 1) * ops.time_order;
    if (v.size() != length)
        throw std::invalid_argument("residual: V has the wrong length");
    const Eigen::VectorXd& lift_values = system.lift.values;
    const Eigen::VectorXd& lift_deta = system.lift.deta;
    const double a = system.coeffs.advection;
    const double b = system.coeffs.diffusion;
    const double c = system.coeffs.reaction;
    const int d = system.delta;

    Eigen::VectorXd g = ops.time_derivative * v +
                        a * (ops.space_first * elementwise_power(v, d + 1)) -
                        b * (ops.space_second * v) - c * v +
                        c * elementwise_power(v, d + 1);
    for (int k = 1; k <= d; ++k) {
        const double coeff = binomial(d + 1, k);
        const Eigen::VectorXd lift_k = elementwise_power(lift_values, k);
        const Eigen::VectorXd lift_k_deta =
            k * (elementwise_power(lift_values, k - 1).array() * lift_deta.array())
                    .matrix();
        const Eigen::VectorXd v_power = elementwise_power(v, d + 1 - k);
        g += (a * coeff) * (lift_k_deta.array() * v_power.array()).matrix();
        g += (a * coeff) *
             (lift_k.array() * (ops.space_first * v_power).array()).matrix();
        g += (c * coeff) * (lift_k.array() * v_power.array()).matrix();
    }
    return g + system.forcing;
}

// Analytic Jacobian of the residual, obtained by differentiating each
// expansion term in V. Dense, of the same square size as the operators.
inline Eigen::MatrixXd jacobian(const ResidualSystem& system, const Eigen::VectorXd& v) {
    const OperatorSet& ops = system.operators;
    const int length = (ops.space_order - 1) * ops.time_order;
    if (v.size() != length)
        throw std::invalid_argument("jacobian: V has the wrong length");
    const Eigen::VectorXd& lift_values = system.lift.values;
    const Eigen::VectorXd& lift_deta = system.lift.deta;
    const double a = system.coeffs.advection;
    const double b = system.coeffs.diffusion;
    const double c = system.coeffs.reaction;
    const int d = system.delta;

    Eigen::MatrixXd j = ops.time_derivative - b * ops.space_second;
    j.diagonal().array() -= c;
    const Eigen::VectorXd top_power = (d + 1) * elementwise_power(v, d);
    j += a * (ops.space_first * top_power.asDiagonal());
    j.diagonal() += c * top_power;
    for (int k = 1; k <= d; ++k) {
        const double coeff = binomial(d + 1, k);
        const Eigen::VectorXd lift_k = elementwise_power(lift_values, k);
        const Eigen::VectorXd lift_k_deta =
            k * (elementwise_power(lift_values, k - 1).array() * lift_deta.array())
                    .matrix();
        const Eigen::VectorXd v_slope = (d + 1 - k) * elementwise_power(v, d - k);
        j.diagonal() += (a * coeff) * (lift_k_deta.array() * v_slope.array()).matrix();
        j += (a * coeff) *
             (lift_k.asDiagonal() * ops.space_first * v_slope.asDiagonal());
        j.diagonal() += (c * coeff) * (lift_k.array() * v_slope.array()).matrix();
    }
    return j;
}

// Independent oracle: collocate the strong form directly. The full-grid
// solution is assembled from V, the lift, and the exact traces; the one-axis
// matrices act on the assembled power (V + Omega)^(delta+1) as a whole, with
// no binomial expansion. Agrees with residual() exactly when the advection
// term is absent or the lift vanishes; otherwise the two differ by the
// aliasing defect of the discrete product rule, since differentiating a
// product of interpolants term-by-term is not the same as differentiating
// the interpolant of the product.
inline Eigen::VectorXd direct_collocation_residual(
    const GridSpec& space, const GridSpec& time, const BoundaryData& data,
    const TransformedCoefficients& coeffs, int delta, const Eigen::VectorXd& v) {
    const int ns = space.order;
    const int nt = time.order;
    const int length = (ns - 1) * nt;
    if (v.size() != length)
        throw std::invalid_argument("direct_collocation_residual: V has the wrong length");
    Eigen::MatrixXd u(ns + 1, nt + 1);
    for (int i = 0; i <= ns; ++i) u(i, 0) = data.initial(space.nodes[i]);
    for (int j = 1; j <= nt; ++j) {
        u(0, j) = data.left(time.nodes[j]);
        u(ns, j) = data.right(time.nodes[j]);
    }
    for (int i = 1; i <= ns - 1; ++i)
        for (int j = 1; j <= nt; ++j)
            u(i, j) = v[(i - 1) * nt + (j - 1)] +
                      lift_value(data, space.nodes[i], time.nodes[j]);

    const Eigen::MatrixXd d_space = diff_matrix(space).entries;
    const Eigen::MatrixXd d_space2 = second_diff_matrix(space).entries;
    const Eigen::MatrixXd d_time = diff_matrix(time).entries;
    Eigen::MatrixXd u_power = u;
    for (int k = 1; k <= delta; ++k) u_power.array() *= u.array();
    const Eigen::MatrixXd u_t = u * d_time.transpose();
    const Eigen::MatrixXd power_eta = d_space * u_power;
    const Eigen::MatrixXd u_etaeta = d_space2 * u;

    Eigen::VectorXd g(length);
    for (int i = 1; i <= ns - 1; ++i)
        for (int j = 1; j <= nt; ++j)
            g[(i - 1) * nt + (j - 1)] =
                u_t(i, j) + coeffs.advection * power_eta(i, j) -
                coeffs.diffusion * u_etaeta(i, j) -
                coeffs.reaction * (u(i, j) - u_power(i, j));
    return g;
}

}  // namespace gbf
