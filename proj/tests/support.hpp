#pragma once

// Test-only generators and oracles. Nothing here calls the symbolic
// differentiation code, so it can serve as an independent check on it.

#include <array>
#include <optional>
#include <random>
#include <utility>

#include "jetlin/errors.hpp"
#include "jetlin/rational_expr.hpp"

namespace jetlin::testing {

using Point = std::array<Rational, kNumVars>;

inline Rational random_rational(std::mt19937& rng, int span = 7)
{
    std::uniform_int_distribution<int> num(-span, span), den(1, 5);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

/// Small random polynomial; `vars` selects which variables may appear.
inline Poly random_poly(std::mt19937& rng, int max_terms = 3, int max_deg = 2,
                        std::array<bool, kNumVars> vars = {true, true, true, true})
{
    std::uniform_int_distribution<int> nterms(1, max_terms), deg(0, max_deg), coef(-4, 4);
    std::vector<Term> terms;
    const int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Term term;
        for (std::size_t i = 0; i < kNumVars; ++i) term.exp[i] = vars[i] ? static_cast<std::uint32_t>(deg(rng)) : 0;
        int c = coef(rng);
        term.coef = c == 0 ? 1 : c;
        terms.push_back(term);
    }
    return Poly::from_terms(std::move(terms));
}

inline RationalExpr random_expr(std::mt19937& rng, int max_terms = 3, int max_deg = 2,
                                std::array<bool, kNumVars> vars = {true, true, true, true})
{
    Poly den;
    do {
        den = random_poly(rng, 2, max_deg, vars);
    } while (den.is_zero());
    return RationalExpr::from_polys(random_poly(rng, max_terms, max_deg, vars), den);
}

inline Point random_point(std::mt19937& rng)
{
    Point p;
    for (auto& c : p) c = random_rational(rng, 9);
    return p;
}

/// Value of `e` at a random point where every listed expression is regular.
template <typename... Exprs>
Point regular_point(std::mt19937& rng, const Exprs&... exprs)
{
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Point pt = random_point(rng);
        if (((exprs.denominator().eval(pt) != 0) && ...)) return pt;
    }
    throw std::runtime_error("no regular point found");
}

// Forward-mode dual-number evaluation of a polynomial: value and derivative
// along `v`, computed term by term from exponents and coefficients.
inline std::pair<Rational, Rational> dual_eval(const Poly& p, JetVar v, const Point& pt)
{
    Rational val(0), der(0);
    for (const auto& t : p.terms()) {
        Rational a = t.coef, da(0);
        for (std::size_t i = 0; i < kNumVars; ++i) {
            for (std::uint32_t k = 0; k < t.exp[i]; ++k) {
                const Rational dx = (kAllVars[i] == v) ? Rational(1) : Rational(0);
                da = da * pt[i] + a * dx;
                a *= pt[i];
            }
        }
        val += a;
        der += da;
    }
    return {val, der};
}

/// Exact derivative of e with respect to v at pt via the quotient rule on
/// dual numbers.
inline Rational derivative_at(const RationalExpr& e, JetVar v, const Point& pt)
{
    auto [n, dn] = dual_eval(e.numerator(), v, pt);
    auto [d, dd] = dual_eval(e.denominator(), v, pt);
    if (d == 0) throw SingularPoint();
    return (dn * d - n * dd) / (d * d);
}

/// Schwartz-Zippel style agreement check at `n` random regular points.
inline bool agree_at_points(const RationalExpr& a, const RationalExpr& b, std::mt19937& rng, int n = 20)
{
    for (int i = 0; i < n; ++i) {
        const Point pt = regular_point(rng, a, b);
        if (a.eval(pt) != b.eval(pt)) return false;
    }
    return true;
}

}  // namespace jetlin::testing

#include "jetlin/point_transform.hpp"

namespace jetlin::testing {

/// Nondegenerate point transformation drawn from a small template family
/// (affine maps, shears, inversions c/(x u), monomial scalings x^a u^b),
/// composed up to `depth` times.
inline PointTransform random_transform(std::mt19937& rng, int depth = 2)
{
    std::uniform_int_distribution<int> kind(0, 5), small(-3, 3), expo(-2, 2);
    const auto nonzero = [&] {
        int k = 0;
        while (k == 0) k = small(rng);
        return k;
    };
    const auto one = [&]() -> PointTransform {
        while (true) {
            try {
                switch (kind(rng)) {
                case 0:  // affine
                    return PointTransform(small(rng) * kX + small(rng) * kU + small(rng),
                                          small(rng) * kX + small(rng) * kU + small(rng));
                case 1:  // shear
                    return PointTransform(kX + nonzero() * kU, kU);
                case 2:
                    return PointTransform(kX, kU + nonzero() * kX * kX);
                case 3:  // inversion
                    return PointTransform(kX, RationalExpr(nonzero()) / (kX * kU));
                case 4: {  // monomial scaling
                    const int a = expo(rng), b = expo(rng);
                    return PointTransform(kX, kX.pow(a) * kU.pow(b == 0 ? 1 : b));
                }
                default:
                    return PointTransform(kU + small(rng), kX);
                }
            } catch (const DegenerateTransform&) {
            }
        }
    };
    PointTransform t = one();
    std::uniform_int_distribution<int> extra(0, depth - 1);
    for (int k = extra(rng); k > 0; --k) {
        try {
            t = compose(one(), t);
        } catch (const DegenerateTransform&) {
        }
    }
    return t;
}

}  // namespace jetlin::testing

namespace jetlin::testing {

/// D_x g at a point, assembled from dual-number partials.
inline Rational total_derivative_at(const RationalExpr& g, const RationalExpr& f, const Point& pt)
{
    return derivative_at(g, JetVar::X, pt) + pt[2] * derivative_at(g, JetVar::U, pt) +
           pt[3] * derivative_at(g, JetVar::P, pt) + f.eval(pt) * derivative_at(g, JetVar::Q, pt);
}

inline const char* const kExample31 = "(6/u*p + 3/x)*q - 6/u^2*p^3 - 6/(x*u)*p^2 - 6/x^2*p - 6*u/x^3";
inline const char* const kExample32 = "3*u''^2/(1+u')";
inline const char* const kExample33 = "3/2*u''^2/u'";

}  // namespace jetlin::testing
