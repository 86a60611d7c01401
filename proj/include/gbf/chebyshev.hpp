#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace gbf {

// One collocation axis: Chebyshev-Gauss-Lobatto nodes on [-1, 1] in
// ascending order, plus the weights of the discrete Chebyshev inner product
// (pi/2N at the two endpoints, pi/N inside).
struct GridSpec {
    int order = 0;  // polynomial order N; the grid has N+1 nodes
    Eigen::VectorXd nodes;
    Eigen::VectorXd quad_weights;
};

inline GridSpec cgl_grid(int order) {
    if (order < 1)
        throw std::invalid_argument("cgl_grid: order must be at least 1");
    const int n = order;
    GridSpec grid;
    grid.order = n;
    grid.nodes.resize(n + 1);
    grid.quad_weights.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        // Sine form of -cos(j pi / N). Symmetric index pairs evaluate to the
        // same magnitude, so nodes[j] + nodes[N-j] == 0 at the bit level and
        // the endpoints are exactly -1 and +1.
        grid.nodes[j] = std::sin(std::numbers::pi * (2 * j - n) / (2 * n));
        grid.quad_weights[j] =
            (j == 0 || j == n) ? std::numbers::pi / (2 * n) : std::numbers::pi / n;
    }
    return grid;
}

// Dense nodal differentiation matrix for one axis.
struct DiffMatrix {
    int order = 0;
    Eigen::MatrixXd entries;
};

// First-derivative collocation matrix. Off-diagonal entries follow the
// classical formula c_a / (c_b (z_a - z_b)) with alternating sign; the
// diagonal is defined as the negated row sum so that constants are
// annihilated exactly instead of drifting at large N.
inline DiffMatrix diff_matrix(const GridSpec& grid) {
    const int n = grid.order;
    DiffMatrix d;
    d.order = n;
    d.entries.setZero(n + 1, n + 1);
    auto endpoint_scale = [n](int j) { return (j == 0 || j == n) ? 2.0 : 1.0; };
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; b <= n; ++b) {
            if (a == b) continue;
            const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
            d.entries(a, b) = sign * endpoint_scale(a) /
                              (endpoint_scale(b) * (grid.nodes[a] - grid.nodes[b]));
        }
        d.entries(a, a) = -d.entries.row(a).sum();
    }
    return d;
}

// Second-derivative matrix as the square of the first. Squaring is exact on
// the degree-N polynomial space and keeps a single source of truth for the
// entries.
inline DiffMatrix second_diff_matrix(const GridSpec& grid) {
    const DiffMatrix first = diff_matrix(grid);
    DiffMatrix second;
    second.order = grid.order;
    second.entries = first.entries * first.entries;
    return second;
}

// Evaluates the polynomial interpolant of nodal samples at one point via the
// barycentric formula with CGL weights (half weight at the endpoints,
// alternating sign). An exact node hit returns the stored sample unchanged.
inline double barycentric_eval(const GridSpec& grid, const Eigen::VectorXd& samples,
                               double point) {
    const int n = grid.order;
    if (samples.size() != n + 1)
        throw std::invalid_argument("barycentric_eval: sample count does not match grid");
    if (!(point >= -1.0 && point <= 1.0))
        throw std::domain_error("barycentric_eval: point outside [-1, 1]");
    for (int j = 0; j <= n; ++j)
        if (point == grid.nodes[j]) return samples[j];
    double numerator = 0.0;
    double denominator = 0.0;
    double sign = 1.0;
    for (int j = 0; j <= n; ++j, sign = -sign) {
        const double weight = ((j == 0 || j == n) ? 0.5 : 1.0) * sign;
        const double factor = weight / (point - grid.nodes[j]);
        numerator += factor * samples[j];
        denominator += factor;
    }
    return numerator / denominator;
}

// Discrete Chebyshev coefficients of nodal samples via Gauss-Lobatto
// quadrature. The normalization halves the first and last modes (the
// quadrature is exact for the product of T_p with polynomials of degree
// below 2N only, and T_N needs the same halving as T_0); with it, samples of
// any T_p map to the p-th unit vector.
inline Eigen::VectorXd modal_coefficients(const GridSpec& grid,
                                          const Eigen::VectorXd& samples) {
    const int n = grid.order;
    if (samples.size() != n + 1)
        throw std::invalid_argument("modal_coefficients: sample count does not match grid");
    Eigen::VectorXd coefficients(n + 1);
    for (int p = 0; p <= n; ++p) {
        const double norm =
            ((p == 0 || p == n) ? 2.0 : 1.0) * std::numbers::pi / 2.0;
        double accumulated = 0.0;
        for (int l = 0; l <= n; ++l) {
            const double theta = std::acos(grid.nodes[l]);
            accumulated += std::cos(p * theta) * samples[l] * grid.quad_weights[l];
        }
        coefficients[p] = accumulated / norm;
    }
    return coefficients;
}

}  // namespace gbf
