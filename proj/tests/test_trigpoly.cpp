#include "doctest.h"
#include "oracles.hpp"

#include "critlen/errors.hpp"
#include "critlen/trigpoly.hpp"

#include <numbers>
#include <random>

using namespace critlen;

namespace {

Poly poly(std::initializer_list<long> cs)
{
    std::vector<BigRational> v;
    for (long c : cs)
        v.emplace_back(c);
    return Poly(v);
}

TrigPoly random_trigpoly(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coeff(-5, 5), den(1, 4), deg(0, 3), harm(0, 3), terms(1, 4);
    TrigPoly out;
    const int count = terms(rng);
    for (int t = 0; t < count; ++t) {
        std::vector<BigRational> cs;
        const int d = deg(rng);
        for (int i = 0; i <= d; ++i) {
            BigRational q(coeff(rng), den(rng));
            q.canonicalize();
            cs.push_back(q);
        }
        const int k = harm(rng);
        out += (rng() & 1) ? TrigPoly::sin(k, Poly(cs)) : TrigPoly::cos(k, Poly(cs));
    }
    return out;
}

} // namespace

TEST_CASE("addition cancels and simplifies")
{
    CHECK((TrigPoly::sin(1) + (-TrigPoly::sin(1))).is_zero());
    CHECK(spherical_fn(1) + TrigPoly::cos(1, poly({0, 1})) == TrigPoly::sin(1));
    CHECK(spherical_fn(2) + TrigPoly::cos(1, poly({0, 3})) == TrigPoly::sin(1, poly({3, 0, -1})));
}

TEST_CASE("products reduce to harmonics")
{
    const BigRational half(1, 2);
    CHECK(TrigPoly::sin(1) * TrigPoly::sin(1) == TrigPoly::constant(half) - half * TrigPoly::cos(2));
    CHECK(TrigPoly::sin(1, poly({0, 1})) * TrigPoly::cos(1) == TrigPoly::sin(2, Poly({0, half})));
    const double s = std::sin(2.0) - 2 * std::cos(2.0);
    CHECK(oracle::rel_gap(evaluate(spherical_fn(1) * spherical_fn(1), 2.0), s * s) <= 1e-14);
}

TEST_CASE("derivative")
{
    CHECK(derivative(TrigPoly::sin(1)) == TrigPoly::cos(1));
    CHECK(derivative(spherical_fn(1)) == TrigPoly::sin(1, poly({0, 1})));
    CHECK(derivative(spherical_fn(1)) == TrigPoly::x() * spherical_fn(0));
    CHECK(derivative(TrigPoly::cos(2, poly({0, 0, 1}))) ==
          TrigPoly::cos(2, poly({0, 2})) - TrigPoly::sin(2, poly({0, 0, 2})));
}

TEST_CASE("evaluation")
{
    CHECK(evaluate(spherical_fn(0), std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::rel_gap(evaluate(spherical_fn(2), std::numbers::pi), 3 * std::numbers::pi) <= 1e-14);
    const double j = oracle::bisect([](long double x) { return std::sin(x) - x * std::cos(x); }, 4.0L, 5.0L);
    CHECK(j == doctest::Approx(4.4934094579).epsilon(1e-10));
    CHECK(std::fabs(evaluate(spherical_fn(1), j)) <= 1e-12);
    CHECK_THROWS_AS(evaluate(spherical_fn(1), std::nan("")), UsageError);
}

TEST_CASE("spherical functions")
{
    CHECK(spherical_fn(0) == TrigPoly::sin(1));
    CHECK(spherical_fn(2) == TrigPoly::sin(1, poly({3, 0, -1})) - TrigPoly::cos(1, poly({0, 3})));
    CHECK(spherical_fn(3) == TrigPoly::sin(1, poly({15, 0, -6})) + TrigPoly::cos(1, poly({0, -15, 0, 1})));
    for (double x : {1.0, 5.0, 10.0})
        CHECK(oracle::rel_gap(evaluate(spherical_fn(3), x), oracle::spherical_series(3, x)) <= 1e-11);
    CHECK_THROWS_AS(spherical_fn(-1), UsageError);
    CHECK_THROWS_AS(spherical_fn(kMaxSphericalOrder + 1), UsageError);
}

TEST_CASE("structural recurrences hold exactly")
{
    const TrigPoly X = TrigPoly::x();
    for (int n = 1; n <= 10; ++n) {
        const TrigPoly f = spherical_fn(n);
        const TrigPoly f1 = derivative(f);
        CHECK((X * derivative(f1) - BigRational(2 * n) * f1 + X * f).is_zero());
        CHECK(f1 == X * spherical_fn(n - 1));
    }
}

TEST_CASE("Maclaurin data and divided evaluation")
{
    for (int n = 0; n <= 6; ++n) {
        const TrigPoly f = spherical_fn(n);
        CHECK(vanishing_order(f) == 2 * n + 1);
        const DividedEvaluator q(f * f, 4 * n + 2);
        for (double x : {1e-6, 5e-3, 2e-2, 0.7}) {
            const double expect = std::pow(oracle::spherical_series(n, x) / std::pow(x, 2 * n + 1), 2);
            CHECK(oracle::rel_gap(q(x), expect) <= 1e-13);
        }
    }
    // f_1 = x^3/3 - x^5/30 + ...
    const auto c = maclaurin(spherical_fn(1), 5);
    CHECK(c[3] == BigRational(1, 3));
    CHECK(c[5] == BigRational(-1, 30));
    CHECK(derivative_at_zero(spherical_fn(1), 3) == 2);
    CHECK(vanishing_order(TrigPoly()) == -1);
}

TEST_CASE("rationals print and parse")
{
    CHECK(to_fraction_string(BigRational(3)) == "3/1");
    CHECK(parse_rational("-6/4") == BigRational(-3, 2));
    CHECK(parse_rational("7") == 7);
    CHECK_THROWS_AS(parse_rational("1/0"), UsageError);
    CHECK_THROWS_AS(parse_rational("x"), UsageError);
}

TEST_CASE("ring properties on random elements")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> point(0.1, 8.0);
    for (int trial = 0; trial < 60; ++trial) {
        const TrigPoly a = random_trigpoly(rng), b = random_trigpoly(rng), c = random_trigpoly(rng);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(derivative(a * b) == derivative(a) * b + a * derivative(b));
        CHECK((a - a).is_zero());
        CHECK(trigpoly_from_json(to_json(a)) == a);
        const double x = point(rng);
        const double va = evaluate(a, x), vb = evaluate(b, x);
        CHECK(std::fabs(evaluate(a * b, x) - va * vb) <= 1e-12 * std::max(1.0, std::fabs(va * vb)));
    }
}
