#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "flks/model.hpp"

using namespace flks;

TEST_CASE("arctan flux pointwise values") {
    const FluxModel u = FluxModel::arctan(1.0, 1.0);
    CHECK(u.velocity(0.0) == 0.0);
    CHECK(u.velocity(1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(u.velocity(1e12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(u.velocity(-1e12) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("stiff flux is a sign function with value 0 at 0") {
    const FluxModel u = FluxModel::stiff_sign(2.0);
    CHECK(u.velocity(-0.3) == -2.0);
    CHECK(u.velocity(5.0) == 2.0);
    CHECK(u.velocity(0.0) == 0.0);
}

TEST_CASE("flux oddness, boundedness, monotonicity") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> xs(-50.0, 50.0);
    const FluxModel arc = FluxModel::arctan(1.7, 0.3);
    const FluxModel sgn = FluxModel::stiff_sign(1.7);
    double prev_x = -1e9, prev_v = -2.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = xs(rng);
        CHECK(arc.velocity(-x) == -arc.velocity(x));
        CHECK(sgn.velocity(-x) == -sgn.velocity(x));
        CHECK(std::abs(arc.velocity(x)) <= 1.7);
        CHECK(std::abs(sgn.velocity(x)) <= 1.7);
    }
    // Monotonicity on a sorted sweep.
    for (double x = -20.0; x <= 20.0; x += 0.25) {
        const double v = arc.velocity(x);
        CHECK(v > prev_v);
        prev_x = x;
        prev_v = v;
    }
    (void)prev_x;
    CHECK_THROWS_AS(arc.velocity(std::nan("")), std::domain_error);
}

TEST_CASE("slope at zero") {
    CHECK(FluxModel::arctan(std::numbers::pi / 2.0, 1.0).slope_at_zero() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(FluxModel::arctan(1.0, 2.0 / std::numbers::pi).slope_at_zero() ==
          doctest::Approx(1.0).epsilon(1e-12));
    const FluxModel u = FluxModel::arctan(3.0, 0.1);
    CHECK(u.slope_at_zero() == doctest::Approx(60.0 / std::numbers::pi).epsilon(1e-12));
    // Centered finite difference agrees.
    const double h = 1e-8;
    const double fd = (u.velocity(h) - u.velocity(-h)) / (2.0 * h);
    CHECK(u.slope_at_zero() == doctest::Approx(fd).epsilon(1e-6));
    CHECK(std::isinf(FluxModel::stiff_sign(1.0).slope_at_zero()));
}

TEST_CASE("proliferation law") {
    const ProliferationModel g(0.5);
    CHECK(g.rho_c() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(g.rate(0.1) == 0.5);
    CHECK(g.rate(1.0) == doctest::Approx(0.0));
    CHECK(g.rate(2.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(g.rate(2.0 / 3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(g.rate(-0.1), std::domain_error);

    // Continuity at the threshold: |P(rho_c - e) - P(rho_c + e)| <= 2e/rho_c^2.
    for (double eps : {1e-6, 1e-8, 1e-10}) {
        const double jump = std::abs(g.rate(g.rho_c() - eps) - g.rate(g.rho_c() + eps));
        CHECK(jump <= 2.0 * eps / (g.rho_c() * g.rho_c()) * (1.0 + 1e-9));
    }
}

TEST_CASE("linear stability margin and the critical stiffness") {
    const ProliferationModel g(0.5);
    const auto params_at = [&](double stiffness) {
        const double chi = 1.0 * std::sqrt(0.5);
        const double delta = 2.0 * chi / (std::numbers::pi * stiffness);
        return ModelParams(FluxModel::arctan(chi, delta), g, 4.0);
    };
    const StabilityReport critical = linear_stability_margin(params_at(9.0));
    CHECK(critical.margin == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(critical.is_critical);

    const StabilityReport stable = linear_stability_margin(params_at(0.01));
    CHECK(stable.margin == doctest::Approx(8.99).epsilon(1e-12));
    CHECK(stable.is_stable);

    const StabilityReport unstable = linear_stability_margin(params_at(10.0));
    CHECK(unstable.margin == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(!unstable.is_stable);

    // The stability flag flips exactly at (1+sqrt(d))^2.
    CHECK(linear_stability_margin(params_at(9.0 - 1e-9)).is_stable);
    CHECK(!linear_stability_margin(params_at(9.0 + 1e-9)).is_stable);

    const ModelParams sign_params(FluxModel::stiff_sign(1.0), g, 4.0);
    CHECK(!linear_stability_margin(sign_params).is_stable);
}

TEST_CASE("hatted scaling") {
    CHECK(to_hatted_x(10.0, 0.5) == doctest::Approx(10.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(to_hatted_x(3.0, 1.0) == 3.0);
    CHECK(to_hatted_t(4.0, 1.0) == 4.0);
    CHECK(to_hatted_speed(std::sqrt(2.0), 0.5) == doctest::Approx(2.0).epsilon(1e-12));
    // Round trips.
    CHECK(from_hatted_x(to_hatted_x(7.3, 0.37), 0.37) == doctest::Approx(7.3).epsilon(1e-12));
    CHECK(from_hatted_t(to_hatted_t(7.3, 0.37), 0.37) == doctest::Approx(7.3).epsilon(1e-12));
    CHECK(from_hatted_speed(to_hatted_speed(7.3, 0.37), 0.37) ==
          doctest::Approx(7.3).epsilon(1e-12));
}

TEST_CASE("derived parameter views") {
    const ModelParams params(FluxModel::arctan(1.06066, 0.13505), ProliferationModel(0.5), 4.0);
    CHECK(params.chi_hat() == doctest::Approx(1.5).epsilon(1e-4));
    CHECK(params.stiffness() == doctest::Approx(5.0).epsilon(1e-4));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(FluxModel::arctan(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FluxModel::arctan(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ProliferationModel(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(FluxModel::arctan(1.0, 1.0), ProliferationModel(0.5), -1.0),
                    std::invalid_argument);
}
