#include "doctest.h"
#include "oracles.hpp"

#include "critlen/bessel.hpp"
#include "critlen/errors.hpp"

#include <numbers>

using namespace critlen;

TEST_CASE("series values")
{
    CHECK(bessel_j(BesselOrder(0), 0.0) == 1.0);
    CHECK(bessel_j(BesselOrder(2), 0.0) == 0.0);
    CHECK(std::fabs(bessel_j(BesselOrder(0.5), std::numbers::pi)) <= 1e-13);
    const double x = 3.0;
    const double via_series = std::sqrt(std::numbers::pi / 2) * std::pow(x, 2.5) * bessel_j(BesselOrder(2.5), x);
    CHECK(oracle::rel_gap(via_series, evaluate(spherical_fn(2), x)) <= 1e-12);
    for (double nu : {0.0, 0.5, 1.0, 2.0, 3.4, 7.25})
        for (double t : {0.05, 0.9, 2.5, 6.0, 11.0})
            CHECK(std::fabs(bessel_j(BesselOrder(nu), t) - oracle::bessel_series(nu, t)) <= 1e-14);
}

TEST_CASE("large arguments keep full accuracy")
{
    for (int n = 0; n <= 8; ++n)
        for (double x : {17.0, 23.5, 30.0}) {
            const double lhs = std::sqrt(std::numbers::pi / 2) * std::pow(x, n + 0.5) * bessel_j(BesselOrder(n + 0.5), x);
            CHECK(oracle::rel_gap(lhs, oracle::spherical_series(n, x)) <= 1e-11);
        }
}

TEST_CASE("derivatives")
{
    CHECK(bessel_j_deriv(BesselOrder(0), 1e-12, 1) == doctest::Approx(0.0).epsilon(1e-11));
    for (double t : {0.5, 2.0, 7.0})
        CHECK(bessel_j_deriv(BesselOrder(0), t, 1) == doctest::Approx(-bessel_j(BesselOrder(1), t)).epsilon(1e-13));
    const double nu = 2, x = 3;
    const auto s = bessel_j_stack(BesselOrder(nu), x, 2);
    CHECK(std::fabs(s[2] + s[1] / x + (1 - nu * nu / (x * x)) * s[0]) <= 1e-11);
    // Differentiated ODE gives the third and fourth derivatives independently.
    for (double v : {0.0, 1.5, 3.4})
        for (double t : {0.7, 4.0, 9.5}) {
            const auto d = bessel_j_stack(BesselOrder(v), t, 4);
            const double q = 1 - v * v / (t * t), q1 = 2 * v * v / (t * t * t), q2 = -6 * v * v / std::pow(t, 4);
            const double p = 1 / t, p1 = -1 / (t * t), p2 = 2 / (t * t * t);
            CHECK(std::fabs(d[3] + p * d[2] + (p1 + q) * d[1] + q1 * d[0]) <= 1e-12);
            CHECK(std::fabs(d[4] + p * d[3] + (2 * p1 + q) * d[2] + (p2 + 2 * q1) * d[1] + q2 * d[0]) <= 1e-11);
        }
    const double j = bessel_zero(BesselOrder(3.4), 1).value;
    CHECK(std::fabs(bessel_j_deriv(BesselOrder(3.4), j, 1)) > 0.1);
    CHECK_THROWS_AS(bessel_j_deriv(BesselOrder(1), 1.0, 5), UsageError);
    CHECK_THROWS_AS(BesselOrder(-1), UsageError);
}

TEST_CASE("zeros of J")
{
    CHECK(bessel_zero(BesselOrder(0.5), 1).value == doctest::Approx(std::numbers::pi).epsilon(1e-12));
    const double j32 = oracle::bisect([](long double x) { return std::sin(x) - x * std::cos(x); }, 4.0L, 5.0L);
    CHECK(std::fabs(bessel_zero(BesselOrder(1.5), 1).value - j32) <= 1e-9);
    const double a = bessel_zero(BesselOrder(2.5), 1).value;
    const double b = bessel_zero(BesselOrder(3.5), 1).value;
    const double c = bessel_zero(BesselOrder(2.5), 2).value;
    CHECK(a < b);
    CHECK(b < c);
    CHECK(bessel_zero(BesselOrder(0), 1).value == doctest::Approx(2.404825557695773).epsilon(1e-13));
    CHECK_THROWS_AS(bessel_zero(BesselOrder(1), 0), UsageError);
}

TEST_CASE("zeros of J'")
{
    const double d32 = bessel_deriv_zero(BesselOrder(1.5), 1).value;
    CHECK(d32 > 1.5);
    CHECK(d32 < bessel_zero(BesselOrder(1.5), 1).value);
    CHECK(bessel_deriv_zero(BesselOrder(2.5), 1).value < bessel_zero(BesselOrder(2.5), 1).value);
    const double r = oracle::bisect([](long double x) { return std::tan(x) - 2 * x; }, 1.0L, 1.5L);
    CHECK(r == doctest::Approx(1.1655612).epsilon(1e-7));
    CHECK(std::fabs(bessel_deriv_zero(BesselOrder(0.5), 1).value - r) <= 1e-10);
    CHECK_THROWS_AS(bessel_deriv_zero(BesselOrder(0), 1), UsageError);
}

TEST_CASE("zeros of f_n and f_n'")
{
    for (int n = 1; n <= 6; ++n) {
        const double z = spherical_zero(n, 1).value;
        CHECK(std::fabs(z - bessel_zero(BesselOrder(n + 0.5), 1).value) <= 1e-10);
        const double dz = spherical_deriv_zero(n, 1).value;
        CHECK(std::fabs(evaluate(derivative(spherical_fn(n)), dz)) / std::pow(dz, n) <= 1e-10);
        CHECK(dz > n + 0.5);
        CHECK(dz < z);
    }
}
