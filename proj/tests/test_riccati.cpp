#include <doctest.h>

#include <random>

#include "jetlin/parser.hpp"
#include "jetlin/riccati.hpp"
#include "support.hpp"

using namespace jetlin;

namespace {

// F' = alpha F^2 + beta F + gamma checked pointwise with dual numbers.
bool solves(const RationalExpr& f, const RationalExpr& alpha, const RationalExpr& beta, const RationalExpr& gamma,
            std::mt19937& rng)
{
    for (int k = 0; k < 5; ++k) {
        const auto pt = testing::regular_point(rng, f, alpha, beta, gamma);
        const Rational v = f.eval(pt);
        if (testing::derivative_at(f, JetVar::X, pt) != alpha.eval(pt) * v * v + beta.eval(pt) * v + gamma.eval(pt))
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("Riccati equations of the worked examples")
{
    std::mt19937 rng(11);
    // dF2/dx = (x/2) F2^2 + 3/(2x^3): c/x^2 solves it for c = -1 and c = -3.
    const RationalExpr alpha = kX / 2, gamma = parse("3/(2*x^3)");
    const auto sols = riccati_rational_solutions(alpha, 0, gamma, 4);
    REQUIRE(sols.size() >= 2);
    CHECK(sols[0] == parse("-1/x^2"));
    CHECK(sols[1] == parse("-3/x^2"));
    for (const auto& s : sols) CHECK(solves(s, alpha, 0, gamma, rng));

    // dF2/dz = F2^2 / 2: the constant solution comes first.
    const auto flat = riccati_rational_solutions(Rational(1, 2), 0, 0, 4);
    REQUIRE_FALSE(flat.empty());
    CHECK(flat[0] == RationalExpr(0));
}

TEST_CASE("planted rational solutions are recovered")
{
    std::mt19937 rng(12);
    const std::vector<std::string> planted{"x+2", "1/(x-1)", "(x+1)/(x^2-2)", "2/x + x", "-1/(x^2*(x+1))"};
    for (const auto& text : planted) {
        const RationalExpr f0 = parse(text);
        const RationalExpr alpha = parse("1/x"), beta = kX;
        const RationalExpr gamma = f0.partial(JetVar::X) - alpha * f0 * f0 - beta * f0;
        CAPTURE(text);
        const auto sols = riccati_rational_solutions(alpha, beta, gamma, 4, 16);
        REQUIRE_FALSE(sols.empty());
        for (const auto& s : sols) CHECK(solves(s, alpha, beta, gamma, rng));
        CHECK(std::find(sols.begin(), sols.end(), f0) != sols.end());
    }
}

TEST_CASE("equations without rational solutions")
{
    // Airy-type: F' = F^2 + x.
    CHECK(riccati_rational_solutions(1, 0, kX, 4).empty());
    // Coefficients outside the single-variable class are refused.
    CHECK(riccati_rational_solutions(kU, 0, 0, 4).empty());
    // The degree bound is honored: -1/x^2 needs a denominator of degree 2.
    CHECK(riccati_rational_solutions(kX / 2, 0, parse("3/(2*x^3)"), 1).empty());
}
