#include "doctest.h"
#include "oracles.hpp"

#include "critlen/bessel.hpp"
#include "critlen/critical_length.hpp"
#include "critlen/errors.hpp"

#include <numbers>

using namespace critlen;

TEST_CASE("n = 0 is the first zero of sin")
{
    const auto r = estimate_critical_length(0);
    REQUIRE(r.per_j.size() == 1);
    CHECK(std::fabs(r.estimate - std::numbers::pi) <= 1e-10);
    CHECK(r.conjecture_consistent);
}

TEST_CASE("n = 1 and n = 2 reach the first zero of f_n")
{
    const double j1 = oracle::bisect([](long double x) { return std::sin(x) - x * std::cos(x); }, 4.0L, 5.0L);
    const auto r1 = estimate_critical_length(1);
    CHECK(std::fabs(r1.estimate - j1) <= 1e-8);
    REQUIRE(r1.per_j.size() == 2);
    CHECK(r1.per_j[0].j == 2);
    CHECK_FALSE(r1.per_j[0].first_zero.has_value());
    CHECK_FALSE(r1.per_j[0].indeterminate);

    const double j2 = oracle::bisect(
        [](long double x) { return (3 - x * x) * std::sin(x) - 3 * x * std::cos(x); }, 5.0L, 6.5L);
    const auto r2 = estimate_critical_length(2);
    CHECK(std::fabs(r2.estimate - j2) <= 1e-8);
    CHECK(std::fabs(r2.reference - bessel_zero(BesselOrder(2.5), 1).value) <= 1e-12);
}

TEST_CASE("conjecture scan up to n = 2")
{
    const auto all = conjecture_scan(2, 2);
    REQUIRE(all.size() == 3);
    for (const auto& r : all) {
        CHECK(r.conjecture_consistent);
        CHECK(r.estimate <= r.reference + 1e-8);
    }
}

TEST_CASE("every admissible minor is scanned")
{
    const auto r = estimate_critical_length(3);
    REQUIRE(r.per_j.size() == 4);
    for (std::size_t i = 0; i < r.per_j.size(); ++i)
        CHECK(r.per_j[i].j == 4 + static_cast<int>(i));
    // The last minor is f_n itself, so the estimate never exceeds its zero.
    CHECK(r.estimate <= r.reference + 1e-8);
    const auto j = to_json(r);
    CHECK(j["exploratory"] == true);
    CHECK(j["per_j"].size() == 4);
}

TEST_CASE("threads do not change the result")
{
    const auto a = estimate_critical_length(3, std::nullopt, 1e-12, 1);
    const auto b = estimate_critical_length(3, std::nullopt, 1e-12, 4);
    CHECK(a.estimate == b.estimate);
}

TEST_CASE("argument checks")
{
    CHECK_THROWS_AS(estimate_critical_length(-1), UsageError);
    CHECK_THROWS_AS(estimate_critical_length(2, -1.0), UsageError);
    CHECK_THROWS_AS(estimate_critical_length(2, std::nullopt, 0.0), UsageError);
    CHECK_THROWS_AS(conjecture_scan(7), UsageError);
}

TEST_CASE("a small cap leaves minors without zeros")
{
    const auto r = estimate_critical_length(1, 3.0);
    CHECK(std::isinf(r.estimate));
    CHECK_FALSE(r.conjecture_consistent);
    CHECK(to_json(r)["estimate"].is_null());
}
