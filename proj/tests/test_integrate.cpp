#include <doctest.h>

#include <random>

#include "jetlin/integrate.hpp"
#include "jetlin/parser.hpp"
#include "support.hpp"

using namespace jetlin;

TEST_CASE("rational antiderivatives")
{
    CHECK(antiderivative(parse("1/(x*u^2)"), JetVar::U) == parse("-1/(x*u)"));
    CHECK(antiderivative(parse("x^3"), JetVar::X) == parse("x^4/4"));
    CHECK(antiderivative(parse("1/(x+1)^2"), JetVar::X) == parse("-1/(x+1)"));
    CHECK(antiderivative(parse("x/(x^2+1)^3"), JetVar::X) == parse("-1/(4*(x^2+1)^2)"));
    CHECK(antiderivative(parse("u"), JetVar::X) == parse("x*u"));
    CHECK(antiderivative(RationalExpr(0), JetVar::P) == RationalExpr(0));

    // Logarithmic or arctangent parts have no rational antiderivative.
    CHECK_FALSE(antiderivative(parse("1/x"), JetVar::X));
    CHECK_FALSE(antiderivative(parse("1/(x*u^2)"), JetVar::X));
    CHECK_FALSE(antiderivative(parse("u/(x^2+1)^2"), JetVar::X));
    CHECK_FALSE(antiderivative(parse("1/x^2 + 1/(x+u)"), JetVar::X));
}

TEST_CASE("antiderivatives of random derivatives differentiate back")
{
    std::mt19937 rng(41);
    for (int i = 0; i < 30; ++i) {
        const JetVar v = kAllVars[static_cast<std::size_t>(i % 3)];
        const RationalExpr g = testing::random_expr(rng, 3, 2);
        const RationalExpr r = g.partial(v);
        CAPTURE(r);
        const auto a = antiderivative(r, v);
        REQUIRE(a.has_value());
        for (int k = 0; k < 3; ++k) {
            const auto pt = testing::regular_point(rng, r, *a);
            CHECK(testing::derivative_at(*a, v, pt) == r.eval(pt));
        }
        // Unique up to a v-free summand.
        CHECK_FALSE((*a - g).depends_on(v));
    }
}

TEST_CASE("logarithmic antiderivatives")
{
    CHECK(log_antiderivative(parse("-2/u"), JetVar::U) == parse("1/u^2"));
    CHECK(log_antiderivative(parse("-1/(p+1)"), JetVar::P) == parse("1/(p+1)"));
    CHECK(log_antiderivative(RationalExpr(0), JetVar::X) == RationalExpr(1));
    CHECK_FALSE(log_antiderivative(parse("1/(2*x)"), JetVar::X));  // sqrt(x)
    CHECK_FALSE(log_antiderivative(parse("x"), JetVar::X));        // exp(x^2/2)
    CHECK_FALSE(log_antiderivative(parse("1/u"), JetVar::X));      // exp(x/u)
    CHECK_FALSE(log_antiderivative(parse("1/x^2"), JetVar::X));    // exp(-1/x)

    std::mt19937 rng(43);
    for (int i = 0; i < 20; ++i) {
        const JetVar v = kAllVars[static_cast<std::size_t>(i % 3)];
        RationalExpr h(1);
        for (int f = 0; f < 2; ++f) {
            const Poly factor = testing::random_poly(rng, 2, 2) + Poly::variable(v);
            h *= RationalExpr(factor).pow(static_cast<int>(rng() % 5) - 2);
        }
        const RationalExpr r = h.partial(v) / h;
        CAPTURE(h);
        const auto got = log_antiderivative(r, v);
        REQUIRE(got.has_value());
        const auto pt = testing::regular_point(rng, *got, r);
        CHECK(testing::derivative_at(*got, v, pt) == r.eval(pt) * got->eval(pt));
        CHECK_FALSE((*got / h).depends_on(v));
    }
}

TEST_CASE("linear systems over Q")
{
    // x + y = 3, x - y = 1
    auto s = solve_linear({{1, 1}, {1, -1}}, {3, 1});
    REQUIRE(s);
    CHECK((*s)[0] == 2);
    CHECK((*s)[1] == 1);

    // Underdetermined: free unknowns are zero, pivots taken left to right.
    s = solve_linear({{0, 2, 4}}, {6});
    REQUIRE(s);
    CHECK((*s)[0] == 0);
    CHECK((*s)[1] == 3);
    CHECK((*s)[2] == 0);

    CHECK_FALSE(solve_linear({{1, 1}, {2, 2}}, {1, 3}));

    const auto c = solve_combination({kX, kX * kX, 1 / kU}, 3 * kX - 1 / kU);
    REQUIRE(c);
    CHECK((*c)[0] == 3);
    CHECK((*c)[1] == 0);
    CHECK((*c)[2] == -1);
    CHECK_FALSE(solve_combination({kX, kU}, kP));
}
