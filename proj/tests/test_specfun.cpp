#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "swiptpep/specfun.hpp"

using namespace swiptpep::specfun;

TEST_CASE("q_func basics") {
    CHECK(q_func(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_func(40.0) < 1e-300);  // tail limit, indistinguishable from 0
    CHECK(q_func(1.6449) == doctest::Approx(0.0500).epsilon(1e-3));
    CHECK_THROWS_AS(q_func(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(q_func(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("q_func against series/continued-fraction oracle") {
    for (double x = -6.0; x <= 6.0; x += 0.37) {
        CHECK(q_func(x) == doctest::Approx(oracles::q_ref(x)).epsilon(1e-12));
    }
}

TEST_CASE("q_func symmetry") {
    for (double x : {0.0, 0.3, 1.0, 2.5, 4.4, 7.9}) {
        CHECK(std::abs(q_func(x) + q_func(-x) - 1.0) <= 1e-12);
    }
}

TEST_CASE("gamma_upper_zero reference values") {
    CHECK(gamma_upper_zero(1.0) == doctest::Approx(0.219384).epsilon(1e-5));
    CHECK(gamma_upper_zero(10.0) == doctest::Approx(4.157e-6).epsilon(1e-4));
    CHECK_THROWS_AS(gamma_upper_zero(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_upper_zero(-2.0), std::domain_error);
}

TEST_CASE("gamma_upper_zero equals its defining integral") {
    // G(0,x) = int_x^inf exp(-t)/t dt, shifted to a (0,inf) integrand.
    for (double x : {0.1, 1.0, 5.0, 20.0}) {
        const double by_quad =
            quad_semi_infinite([x](double s) { return std::exp(-(x + s)) / (x + s); });
        CHECK(gamma_upper_zero(x) == doctest::Approx(by_quad).epsilon(1e-9));
    }
}

TEST_CASE("gamma_upper_zero leading asymptotic term") {
    const double x = 1e4;
    CHECK(gamma_upper_zero_scaled(x) * x == doctest::Approx(1.0).epsilon(2e-4));
}

TEST_CASE("scaled product consistency") {
    for (double x : {0.05, 0.7, 1.0, 3.0, 30.0, 500.0}) {
        CHECK(gamma_upper_zero_scaled(x) ==
              doctest::Approx(std::exp(x) * gamma_upper_zero(x)).epsilon(1e-12));
    }
    // stays finite where exp(x) alone would overflow
    CHECK(gamma_upper_zero_scaled(5000.0) > 0.0);
    CHECK(std::isfinite(gamma_upper_zero_scaled(5000.0)));
}

TEST_CASE("expint_ei values and identities") {
    CHECK(expint_ei(1.0) == doctest::Approx(1.895117).epsilon(1e-6));
    CHECK(expint_ei(-1.0) == doctest::Approx(-0.219384).epsilon(1e-5));
    CHECK_THROWS_AS(expint_ei(0.0), std::domain_error);
    for (double x : {0.2, 1.0, 4.0, 17.0}) {
        CHECK(expint_ei(-x) == doctest::Approx(-gamma_upper_zero(x)).epsilon(1e-9));
    }
}

TEST_CASE("expint_ei long-double series oracle") {
    for (double x : {0.5, 1.0, 8.0, 30.0, 50.0}) {
        long double sum = 0.0L;
        long double term = 1.0L;
        for (int k = 1; k < 400; ++k) {
            term *= static_cast<long double>(x) / k;
            sum += term / k;
        }
        const double ref =
            static_cast<double>(static_cast<long double>(oracles::kEulerGamma) +
                                std::log(static_cast<long double>(x)) + sum);
        CHECK(expint_ei(x) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("quad_semi_infinite reference integrals") {
    CHECK(quad_semi_infinite([](double t) { return std::exp(-t); }) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(quad_semi_infinite([](double t) { return t * std::exp(-t); }) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(quad_semi_infinite([](double t) { return std::exp(-t) / (1.0 + t); }) ==
          doctest::Approx(0.596347).epsilon(1e-6));
    // same value through the incomplete-gamma route
    CHECK(quad_semi_infinite([](double t) { return std::exp(-t) / (1.0 + t); }) ==
          doctest::Approx(std::exp(1.0) * gamma_upper_zero(1.0)).epsilon(1e-9));
}

TEST_CASE("quad_semi_infinite handles an integrable endpoint singularity") {
    // int_0^inf exp(-t)/sqrt(t) dt = sqrt(pi)
    const double v = quad_semi_infinite([](double t) { return std::exp(-t) / std::sqrt(t); });
    CHECK(v == doctest::Approx(1.7724538509055160273).epsilon(1e-8));
}

TEST_CASE("quad_semi_infinite determinism") {
    const auto f = [](double t) { return std::exp(-t) / (1.0 + 3.7 * t * t); };
    const double a = quad_semi_infinite(f);
    const double b = quad_semi_infinite(f);
    CHECK(a == b);  // bit identical
}

TEST_CASE("quad_semi_infinite error handling") {
    QuadratureSpec bad;
    bad.relative_tolerance = -1.0;
    CHECK_THROWS_AS(quad_semi_infinite([](double t) { return std::exp(-t); }, bad),
                    std::invalid_argument);

    QuadratureSpec strict;
    strict.relative_tolerance = 1e-15;
    strict.absolute_tolerance = 1e-300;
    strict.max_subdivisions = 3;
    try {
        quad_semi_infinite([](double t) { return std::exp(-t) / (1.0 + 1e8 * t * t); }, strict);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.best_estimate() > 0.0);
        CHECK(e.error_bound() > 0.0);
    }
}
