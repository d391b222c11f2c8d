#include <doctest.h>

#include <random>

#include "jetlin/errors.hpp"
#include "jetlin/parser.hpp"
#include "support.hpp"

using namespace jetlin;
using testing::Point;

TEST_CASE("field arithmetic examples")
{
    CHECK((kP + (-kP)).is_zero());
    CHECK(RationalExpr(1) / (1 + kP) * (1 + kP) == RationalExpr(1));
    CHECK(((kX + kU).pow(2) - (kX * kX + 2 * kX * kU + kU * kU)).is_zero());
    CHECK_THROWS_AS(kX / RationalExpr(0), DivisionByZero);
    CHECK_THROWS_AS(RationalExpr::from_polys(Poly(1), Poly{}), DivisionByZero);
}

TEST_CASE("canonical form")
{
    const RationalExpr e = (kQ * kQ - kP * kP) / (kQ - kP);
    CHECK(e == kQ + kP);
    CHECK(e.denominator() == Poly(1));
    const RationalExpr h = RationalExpr(3) / (2 * kP + 2);
    // Denominator is monic.
    CHECK(h.denominator().leading_coef() == 1);
    CHECK(h.to_string() == "3/2/(p+1)");
    CHECK(RationalExpr(0).to_string() == "0");
}

TEST_CASE("is_zero examples")
{
    CHECK(is_zero((kP + kQ) - (kQ + kP)));
    CHECK_FALSE(is_zero(RationalExpr(1) / (kX * kU * kU)));
}

TEST_CASE("partial derivative examples")
{
    const RationalExpr f = 3 * kQ * kQ / (1 + kP);
    CHECK(partial(f, JetVar::Q) == 6 * kQ / (1 + kP));
    CHECK(partial(f, JetVar::P) == -3 * kQ * kQ / (1 + kP).pow(2));
    CHECK(partial(kX, JetVar::U).is_zero());

    // Cross-check against dual-number evaluation at 20 points off p = -1.
    std::mt19937 rng(11);
    for (int i = 0; i < 20; ++i) {
        const Point pt = testing::regular_point(rng, f);
        for (JetVar v : kAllVars) CHECK(partial(f, v).eval(pt) == testing::derivative_at(f, v, pt));
    }
}

TEST_CASE("evaluation")
{
    const RationalExpr f = 3 * kQ * kQ / (1 + kP);
    const Point a{Rational(0), Rational(0), Rational(1), Rational(2)};
    CHECK(eval(f, a) == 6);
    const Point b{Rational(2), Rational(3), Rational(0), Rational(0)};
    CHECK(eval(kX + kU, b) == 5);
    const Point c{Rational(0), Rational(0), Rational(-1), Rational(0)};
    CHECK_THROWS_AS(eval(RationalExpr(1) / (1 + kP), c), SingularPoint);
}

TEST_CASE("negative powers and substitution")
{
    CHECK(kX.pow(-2) == RationalExpr(1) / (kX * kX));
    CHECK_THROWS_AS(RationalExpr(0).pow(-1), DivisionByZero);
    const RationalExpr f = kQ / (kX + kU);
    // x -> u, u -> x, q -> p^2
    const RationalExpr g = f.substitute({kU, kX, kP, kP * kP});
    CHECK(g == kP * kP / (kX + kU));
    const RationalExpr h = (kX * kX - 1).substitute({1 / (kU + 1), kU, kP, kQ});
    CHECK(h == (1 / (kU + 1)).pow(2) - 1);
}

TEST_CASE("randomized kernel properties")
{
    std::mt19937 rng(2024);
    for (int i = 0; i < 40; ++i) {
        const RationalExpr a = testing::random_expr(rng), b = testing::random_expr(rng), c = testing::random_expr(rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(parse(a.to_string()) == a);
        for (JetVar v : kAllVars) {
            CHECK(partial(a * b, v) == partial(a, v) * b + a * partial(b, v));
            for (JetVar w : kAllVars) CHECK(partial(partial(a, v), w) == partial(partial(a, w), v));
        }
        // Structural equality agrees with evaluation.
        const RationalExpr d = a * b - b * a + c;
        CHECK(d == c);
        CHECK(testing::agree_at_points(d, c, rng, 5));
    }
}
