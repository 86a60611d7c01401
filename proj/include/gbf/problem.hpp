#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace gbf {

// A physical interval, mapped to and from the reference interval [-1, 1].
struct Interval {
    double lo = -1.0;
    double hi = 1.0;
};

inline double affine_to_unit(double value, const Interval& source) {
    if (!(source.hi > source.lo))
        throw std::invalid_argument("affine_to_unit: degenerate interval");
    return (2.0 * value - (source.hi + source.lo)) / (source.hi - source.lo);
}

inline double affine_from_unit(double unit, const Interval& source) {
    if (!(source.hi > source.lo))
        throw std::invalid_argument("affine_from_unit: degenerate interval");
    return 0.5 * (source.hi - source.lo) * unit + 0.5 * (source.hi + source.lo);
}

// One instance of the generalized Burgers-Fisher equation
//   u_t + sigma1 u^delta u_eta - mu u_etaeta = sigma2 u (1 - u^delta)
// posed on eta in [eta_range.lo, eta_range.hi], t in [0, t_final].
struct ProblemSpec {
    double sigma1 = 1.0;  // advection strength, >= 0
    double sigma2 = 1.0;  // reaction strength, may be negative
    double mu = 1.0;      // diffusion, > 0
    int delta = 1;        // nonlinearity exponent, positive integer
    Interval eta_range{0.0, 1.0};
    double t_final = 1.0;

    void validate() const {
        if (sigma1 < 0.0)
            throw std::invalid_argument("ProblemSpec: sigma1 must be nonnegative");
        if (mu <= 0.0)
            throw std::invalid_argument("ProblemSpec: mu must be positive");
        if (delta < 1)
            throw std::invalid_argument("ProblemSpec: delta must be a positive integer");
        if (!(eta_range.hi > eta_range.lo))
            throw std::invalid_argument("ProblemSpec: eta range must be nondegenerate");
        if (!(t_final > 0.0))
            throw std::invalid_argument("ProblemSpec: t_final must be positive");
    }
};

// Coefficients of the equation after mapping space and time onto [-1, 1]^2
// and absorbing u^delta u_eta = (u^(delta+1))_eta / (delta+1):
//   u_t + advection (u^(delta+1))_eta - diffusion u_etaeta
//       - reaction (u - u^(delta+1)) = 0.
struct TransformedCoefficients {
    double advection = 0.0;  // sigma1 T / ((delta+1)(eta_hi - eta_lo))
    double diffusion = 0.0;  // 2 mu T / (eta_hi - eta_lo)^2
    double reaction = 0.0;   // sigma2 T / 2
};

inline TransformedCoefficients transformed_coefficients(const ProblemSpec& spec) {
    spec.validate();
    const double width = spec.eta_range.hi - spec.eta_range.lo;
    TransformedCoefficients coeffs;
    coeffs.advection = spec.sigma1 * spec.t_final / ((spec.delta + 1) * width);
    coeffs.diffusion = 2.0 * spec.mu * spec.t_final / (width * width);
    coeffs.reaction = spec.sigma2 * spec.t_final / 2.0;
    return coeffs;
}

// Parameters of the closed-form traveling wave
//   u(eta, t) = (1/2 + 1/2 tanh(steepness (eta - speed t)))^(1/delta),
// which solves the equation whenever sigma1 > 0.
inline double wave_steepness(const ProblemSpec& spec) {
    return -spec.sigma1 * spec.delta / (2.0 * (spec.delta + 1));
}

inline double wave_speed(const ProblemSpec& spec) {
    return spec.sigma1 / (spec.delta + 1) +
           spec.sigma2 * (spec.delta + 1) / spec.sigma1;
}

// Exact traveling-wave solution in physical coordinates. Serves as the
// benchmark oracle; the pure-reaction limit sigma1 = 0 has no member of this
// wave family, so it is rejected.
inline double exact_solution(const ProblemSpec& spec, double eta_physical,
                             double t_physical) {
    spec.validate();
    if (spec.sigma1 <= 0.0)
        throw std::domain_error("exact_solution: closed form requires sigma1 > 0");
    const double phase =
        wave_steepness(spec) * (eta_physical - wave_speed(spec) * t_physical);
    return std::pow(0.5 + 0.5 * std::tanh(phase), 1.0 / spec.delta);
}

// Initial and boundary traces in reference coordinates: initial(eta) is the
// profile at t = -1, left(t) and right(t) are the traces at eta = -1 and
// eta = +1. The corners must agree, initial(-1) = left(-1) and
// initial(+1) = right(-1), or no continuous solution matches the data.
struct BoundaryData {
    std::function<double(double)> initial;
    std::function<double(double)> left;
    std::function<double(double)> right;
};

// Traces of the exact traveling wave on the three data-carrying faces of the
// reference square, for benchmarking against the closed form.
inline BoundaryData benchmark_boundary_data(const ProblemSpec& spec) {
    spec.validate();
    if (spec.sigma1 <= 0.0)
        throw std::domain_error("benchmark_boundary_data: closed form requires sigma1 > 0");
    const Interval time{0.0, spec.t_final};
    BoundaryData data;
    data.initial = [spec](double eta) {
        return exact_solution(spec, affine_from_unit(eta, spec.eta_range), 0.0);
    };
    data.left = [spec, time](double t) {
        return exact_solution(spec, spec.eta_range.lo, affine_from_unit(t, time));
    };
    data.right = [spec, time](double t) {
        return exact_solution(spec, spec.eta_range.hi, affine_from_unit(t, time));
    };
    return data;
}

}  // namespace gbf
