#include <doctest.h>

#include <random>

#include "jetlin/poly.hpp"
#include "support.hpp"

using namespace jetlin;

namespace {

Poly var(JetVar v) { return Poly::variable(v); }

}  // namespace

TEST_CASE("poly arithmetic keeps canonical term order")
{
    const Poly x = var(JetVar::X), u = var(JetVar::U);
    const Poly s = (x + u) * (x + u);
    CHECK(s.to_string() == "x^2+2*x*u+u^2");
    CHECK((s - x * x - (x * u).scaled(2) - u * u).is_zero());
    CHECK(s.degree(JetVar::X) == 2);
    CHECK(s.total_degree() == 2);
    CHECK(Poly(3).is_constant());
    CHECK(Poly{}.is_zero());
}

TEST_CASE("exact division and its failure")
{
    const Poly x = var(JetVar::X), p = var(JetVar::P);
    const Poly a = (x * x - p * p);
    const auto q = try_divide(a, x - p);
    REQUIRE(q.has_value());
    CHECK(*q == x + p);
    CHECK_FALSE(try_divide(a, x + Poly(1)).has_value());
    CHECK_THROWS_AS(divide_exact(x, p), std::logic_error);
}

TEST_CASE("gcd of multivariate polynomials")
{
    const Poly x = var(JetVar::X), u = var(JetVar::U), p = var(JetVar::P), q = var(JetVar::Q);
    const Poly one(1);
    CHECK(gcd(q * q - p * p, q - p) == (q - p).monic());
    CHECK(gcd(x * x * u, x * u * u) == x * u);
    CHECK(gcd((x + u) * (p + one), (x + u) * (q - one)) == x + u);
    CHECK(gcd(x + one, u + one) == one);
    CHECK(gcd(Poly{}, (x + u).scaled(3)) == x + u);
    // gcd is monic.
    CHECK(gcd((x + u).scaled(Rational(3, 2)), (x + u).scaled(5)) == x + u);
}

TEST_CASE("gcd recovers a planted common factor")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 60; ++i) {
        const Poly g = testing::random_poly(rng, 3, 2);
        const Poly a = testing::random_poly(rng, 3, 2), b = testing::random_poly(rng, 3, 2);
        if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
        const Poly ga = g * a, gb = g * b;
        const Poly h = gcd(ga, gb);
        // g divides the gcd, and the gcd divides both inputs.
        CHECK(try_divide(h, g.monic()).has_value());
        CHECK(try_divide(ga, h).has_value());
        CHECK(try_divide(gb, h).has_value());
        // Cofactors are coprime.
        CHECK(gcd(divide_exact(ga, h), divide_exact(gb, h)).is_constant());
    }
}

TEST_CASE("coefficient view round-trips")
{
    const Poly x = var(JetVar::X), q = var(JetVar::Q);
    const Poly a = q * q * x + q.scaled(3) + x;
    const auto cs = a.coefficients(JetVar::Q);
    REQUIRE(cs.size() == 3);
    CHECK(cs[0] == x);
    CHECK(cs[1] == Poly(3));
    CHECK(cs[2] == x);
    CHECK(Poly::from_coefficients(JetVar::Q, cs) == a);
}
