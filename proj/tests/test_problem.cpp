#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "gbf/problem.hpp"

namespace {

gbf::ProblemSpec benchmark(double sigma1, double sigma2, int delta, double t_final) {
    gbf::ProblemSpec spec;
    spec.sigma1 = sigma1;
    spec.sigma2 = sigma2;
    spec.mu = 1.0;
    spec.delta = delta;
    spec.eta_range = {0.0, 1.0};
    spec.t_final = t_final;
    return spec;
}

// Fourth-order central differences, good to O(h^4) truncation.
template <typename F>
double fd_slope(F f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

template <typename F>
double fd_curvature(F f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) -
            f(x - 2 * h)) /
           (12 * h * h);
}

}  // namespace

TEST_CASE("affine maps move between physical and unit intervals") {
    const gbf::Interval range{0.0, 1.0};
    CHECK(gbf::affine_to_unit(0.5, range) == 0.0);
    CHECK(gbf::affine_to_unit(0.0, range) == -1.0);
    CHECK(gbf::affine_to_unit(1.0, range) == 1.0);
    CHECK(gbf::affine_from_unit(-1.0, {2.0, 6.0}) == 2.0);
    CHECK(gbf::affine_from_unit(1.0, {2.0, 6.0}) == 6.0);
    CHECK(gbf::affine_from_unit(0.0, {2.0, 6.0}) == 4.0);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> pick(-3.0, 3.0);
    const gbf::Interval wide{-1.75, 2.5};
    for (int k = 0; k < 50; ++k) {
        const double x = pick(rng);
        const double back = gbf::affine_from_unit(gbf::affine_to_unit(x, wide), wide);
        CHECK_THAT(back, Catch::Matchers::WithinAbs(x, 1e-14));
    }

    CHECK_THROWS_AS(gbf::affine_to_unit(0.0, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(gbf::affine_from_unit(0.0, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("ProblemSpec::validate rejects out-of-range parameters") {
    CHECK_NOTHROW(benchmark(1.0, 1.0, 2, 1.0).validate());
    CHECK_NOTHROW(benchmark(0.0, -1.0, 1, 0.5).validate());

    auto bad = benchmark(1.0, 1.0, 2, 1.0);
    bad.sigma1 = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = benchmark(1.0, 1.0, 2, 1.0);
    bad.mu = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = benchmark(1.0, 1.0, 2, 1.0);
    bad.delta = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = benchmark(1.0, 1.0, 2, 1.0);
    bad.t_final = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = benchmark(1.0, 1.0, 2, 1.0);
    bad.eta_range = {0.3, 0.3};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("transformed_coefficients match hand-computed values") {
    const gbf::TransformedCoefficients strong =
        gbf::transformed_coefficients(benchmark(1.0, 1.0, 2, 1.0));
    CHECK_THAT(strong.advection, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-16));
    CHECK(strong.diffusion == 2.0);
    CHECK(strong.reaction == 0.5);

    const gbf::TransformedCoefficients weak =
        gbf::transformed_coefficients(benchmark(0.1, -0.0025, 8, 0.5));
    CHECK_THAT(weak.advection,
               Catch::Matchers::WithinAbs(0.005555555555555556, 1e-17));
    CHECK(weak.diffusion == 1.0);
    CHECK(weak.reaction == -0.000625);

    CHECK(gbf::transformed_coefficients(benchmark(1.0, 0.0, 2, 1.5)).reaction == 0.0);
}

TEST_CASE("transformed_coefficients scale linearly with the horizon") {
    const auto once = gbf::transformed_coefficients(benchmark(1.0, 1.0, 4, 0.75));
    const auto twice = gbf::transformed_coefficients(benchmark(1.0, 1.0, 4, 1.5));
    // Doubling a double is exact, so the scaling holds at the bit level.
    CHECK(twice.advection == 2.0 * once.advection);
    CHECK(twice.diffusion == 2.0 * once.diffusion);
    CHECK(twice.reaction == 2.0 * once.reaction);
}

TEST_CASE("wave parameters match hand-computed values") {
    CHECK_THAT(gbf::wave_steepness(benchmark(1.0, 1.0, 2, 1.0)),
               Catch::Matchers::WithinAbs(-1.0 / 3.0, 1e-16));
    CHECK_THAT(gbf::wave_speed(benchmark(1.0, 1.0, 2, 1.0)),
               Catch::Matchers::WithinAbs(10.0 / 3.0, 1e-15));

    CHECK(gbf::wave_steepness(benchmark(1.0, 1.0, 1, 1.0)) == -0.25);
    CHECK(gbf::wave_speed(benchmark(1.0, 1.0, 1, 1.0)) == 2.5);

    CHECK_THAT(gbf::wave_steepness(benchmark(1.0, 1.0, 8, 1.0)),
               Catch::Matchers::WithinAbs(-4.0 / 9.0, 1e-16));
    CHECK_THAT(gbf::wave_speed(benchmark(1.0, 1.0, 8, 1.0)),
               Catch::Matchers::WithinAbs(1.0 / 9.0 + 9.0, 1e-14));

    CHECK_THAT(gbf::wave_steepness(benchmark(0.1, -0.0025, 4, 0.5)),
               Catch::Matchers::WithinAbs(-0.04, 1e-16));
    CHECK_THAT(gbf::wave_speed(benchmark(0.1, -0.0025, 4, 0.5)),
               Catch::Matchers::WithinAbs(-0.105, 1e-15));
}

TEST_CASE("exact_solution reproduces frozen reference points") {
    // Frozen from an independent multiple-precision evaluation of the
    // traveling-wave formula.
    CHECK_THAT(gbf::exact_solution(benchmark(1.0, 1.0, 2, 1.0), 0.3, 0.2),
               Catch::Matchers::WithinAbs(0.7488715646444967, 5e-16));
    CHECK_THAT(gbf::exact_solution(benchmark(1.0, 1.0, 1, 1.0), 0.5, 0.5),
               Catch::Matchers::WithinAbs(0.5926665999540698, 5e-16));
    CHECK_THAT(gbf::exact_solution(benchmark(1.0, 1.0, 8, 1.0), 0.7, 0.4),
               Catch::Matchers::WithinAbs(0.9912312625637326, 5e-16));
    CHECK_THAT(gbf::exact_solution(benchmark(0.1, -0.0025, 4, 0.5), 0.25, 0.3),
               Catch::Matchers::WithinAbs(0.8385193313907108, 5e-16));
    CHECK_THAT(gbf::exact_solution(benchmark(1.0, 0.0, 2, 2.5), 0.9, 1.7),
               Catch::Matchers::WithinAbs(0.6668372700574189, 5e-16));
}

TEST_CASE("exact_solution behaves like a decreasing front in (0, 1)") {
    SECTION("the moving front carries the half-power value") {
        for (const int delta : {1, 2, 8}) {
            const auto spec = benchmark(1.0, 1.0, delta, 2.0);
            const double speed = gbf::wave_speed(spec);
            const double t = 0.25;
            CHECK_THAT(gbf::exact_solution(spec, speed * t, t),
                       Catch::Matchers::WithinAbs(std::pow(0.5, 1.0 / delta), 1e-15));
        }
    }
    SECTION("values stay strictly inside (0, 1)") {
        const auto spec = benchmark(1.0, 1.0, 2, 2.0);
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> eta(0.0, 1.0), t(0.0, 2.0);
        for (int k = 0; k < 100; ++k) {
            const double u = gbf::exact_solution(spec, eta(rng), t(rng));
            CHECK(u > 0.0);
            CHECK(u < 1.0);
        }
    }
    SECTION("profiles decrease along the spatial direction") {
        const auto spec = benchmark(1.0, 1.0, 4, 1.0);
        double previous = gbf::exact_solution(spec, 0.0, 0.6);
        for (int k = 1; k <= 10; ++k) {
            const double u = gbf::exact_solution(spec, 0.1 * k, 0.6);
            CHECK(u < previous);
            previous = u;
        }
    }
    SECTION("a vanishing advection strength is rejected") {
        auto spec = benchmark(0.0, 1.0, 2, 1.0);
        CHECK_THROWS_AS(gbf::exact_solution(spec, 0.5, 0.5), std::domain_error);
    }
}

TEST_CASE("exact_solution satisfies the differential equation") {
    const auto spec = benchmark(1.0, 1.0, 2, 2.0);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> eta_pick(0.1, 0.9), t_pick(0.1, 1.9);
    const double h = 1e-3;
    for (int k = 0; k < 100; ++k) {
        const double eta = eta_pick(rng);
        const double t = t_pick(rng);
        const double u = gbf::exact_solution(spec, eta, t);
        const double u_t =
            fd_slope([&](double s) { return gbf::exact_solution(spec, eta, s); }, t, h);
        const double u_eta =
            fd_slope([&](double x) { return gbf::exact_solution(spec, x, t); }, eta, h);
        const double u_etaeta = fd_curvature(
            [&](double x) { return gbf::exact_solution(spec, x, t); }, eta, h);
        const double residual = u_t + spec.sigma1 * std::pow(u, spec.delta) * u_eta -
                                spec.mu * u_etaeta -
                                spec.sigma2 * u * (1.0 - std::pow(u, spec.delta));
        REQUIRE_THAT(residual, Catch::Matchers::WithinAbs(0.0, 1e-6));
    }
}

TEST_CASE("benchmark_boundary_data agrees with the exact solution") {
    const auto spec = benchmark(1.0, 1.0, 2, 1.0);
    const gbf::BoundaryData data = gbf::benchmark_boundary_data(spec);

    // Frozen trace values: the initial trace at the right edge and the two
    // lateral traces at physical time 0.2 (unit time -0.6).
    CHECK_THAT(data.initial(1.0),
               Catch::Matchers::WithinAbs(0.5824462475063109, 5e-16));
    CHECK_THAT(data.left(-0.6),
               Catch::Matchers::WithinAbs(0.7805879462581783, 5e-16));
    CHECK_THAT(data.right(-0.6),
               Catch::Matchers::WithinAbs(0.6668372700574189, 5e-16));

    // Corner compatibility: both parameterizations of each corner call the
    // same underlying formula with identical physical arguments.
    CHECK(data.initial(-1.0) == data.left(-1.0));
    CHECK(data.initial(1.0) == data.right(-1.0));
}
