#include "doctest.h"
#include "oracles.hpp"

#include "critlen/bessel.hpp"
#include "critlen/determinants.hpp"
#include "critlen/errors.hpp"

#include <random>

using namespace critlen;

TEST_CASE("v of simple stacks")
{
    for (double x : {0.3, 1.0, 7.0})
        CHECK(v_det(trig_stack(spherical_fn(0), x, 2)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v_det(DerivStack{1.0, {0.0, 3.0, 5.0}}) == 9.0);
    // x^3 at 2: v = 3 * 2^4.
    CHECK(v_det(DerivStack{2.0, {8.0, 12.0, 12.0}}) == 48.0);
    CHECK_THROWS_AS(v_det(DerivStack{1.0, {1.0, 2.0}}), UsageError);
}

TEST_CASE("w of simple stacks")
{
    CHECK(std::fabs(w_det(trig_stack(spherical_fn(0), 1.0, 4))) <= 1e-15);
    const double j = spherical_zero(1, 1).value;
    CHECK(std::fabs(w_det(trig_stack(spherical_fn(1), j, 4))) <= 1e-9);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 100; ++i) {
        DerivStack s{0.0, {u(rng), u(rng), u(rng), u(rng), u(rng)}};
        CHECK(std::fabs(w_det(s) + hankel_det(s)) <= 1e-12);
    }
    CHECK_THROWS_AS(w_det(DerivStack{1.0, {1, 2, 3, 4}}), UsageError);
}

TEST_CASE("minor indices")
{
    CHECK_NOTHROW(check_minor_index(2, 3));
    CHECK_THROWS_AS(check_minor_index(2, 2), UsageError);
    CHECK_THROWS_AS(check_minor_index(2, 6), UsageError);
    CHECK_THROWS_AS(check_minor_index(-1, 1), UsageError);
    CHECK(minor_size(2, 5) == 1);
    const auto b = canonical_basis(2);
    CHECK(b.basis.size() == 6);
    CHECK(b.basis.back() == spherical_fn(2));
}

TEST_CASE("closed forms of the small minors")
{
    for (int n = 0; n <= 4; ++n)
        CHECK(symbolic_minor(n, 2 * n + 1) == spherical_fn(n));
    for (int n = 1; n <= 4; ++n)
        CHECK(symbolic_minor(n, 2 * n) == symbolic_v(spherical_fn(n)));
    const BigRational half(1, 2);
    const TrigPoly v1 = half * TrigPoly::cos(2) + TrigPoly::polynomial(Poly::monomial(1, 2)) - TrigPoly::constant(half);
    CHECK(symbolic_minor(1, 2) == v1);
    CHECK(symbolic_minor(0, 1) == TrigPoly::sin(1));
    CHECK(symbolic_minor(2, 3) == symbolic_w(spherical_fn(2)));
}

TEST_CASE("sign convention of the 3x3 minor")
{
    const double numeric = wronskian_minor(2, 3, 1.0);
    const double direct = w_det(trig_stack(spherical_fn(2), 1.0, 4));
    CHECK(oracle::rel_gap(numeric, direct) <= 1e-10);
    for (int n = 2; n <= 6; ++n)
        CHECK(symbolic_minor(n, 2 * n - 1) == symbolic_w(spherical_fn(n)));
}

TEST_CASE("numeric and symbolic minors agree")
{
    MinorEvaluator m(2, 3);
    const TrigPoly s = symbolic_minor(2, 3);
    double worst = 0;
    for (int i = 1; i <= 200; ++i) {
        const double x = 15.0 * i / 200;
        worst = std::max(worst, oracle::rel_gap(m(x), evaluate(s, x)));
    }
    CHECK(worst <= 1e-10);
    const auto e = m.evaluate(4.0);
    CHECK(e.certified);
}

TEST_CASE("LU determinant")
{
    std::vector<std::vector<MpFloat>> a(3, std::vector<MpFloat>(3, MpFloat(0.0, 128)));
    const double vals[3][3] = {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            a[i][j] = MpFloat(vals[i][j], 128);
    CHECK(lu_determinant(a).to_double() == doctest::Approx(4.0).epsilon(1e-15));
    a[2] = a[0];
    CHECK(lu_determinant(a).to_double() == 0.0);
}

TEST_CASE("v and w of a ring element match the stack formulas")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.2, 12.0);
    for (int n = 0; n <= 5; ++n) {
        const TrigPoly f = spherical_fn(n);
        const TrigPoly v = symbolic_v(f), w = symbolic_w(f);
        for (int i = 0; i < 10; ++i) {
            const double x = u(rng);
            const auto s = trig_stack(f, x, 4);
            const double vs = v_det(s), ws = w_det(s);
            CHECK(std::fabs(evaluate(v, x) - vs) <= 1e-10 * std::max(1.0, std::fabs(vs)));
            CHECK(std::fabs(evaluate(w, x) - ws) <= 1e-9 * std::max(1.0, std::fabs(ws)));
        }
    }
}
