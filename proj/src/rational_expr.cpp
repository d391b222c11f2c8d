#include "jetlin/rational_expr.hpp"

#include <ostream>
#include <stdexcept>

#include "jetlin/errors.hpp"

namespace jetlin {

namespace {

// Makes den monic, folding the scale into num.
std::pair<Poly, Poly> normalize_den(Poly num, Poly den)
{
    if (num.is_zero()) return {Poly{}, Poly(1)};
    const Rational lc = den.leading_coef();
    if (lc != 1) {
        const Rational inv = Rational(1) / lc;
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    return {std::move(num), std::move(den)};
}

}  // namespace

RationalExpr RationalExpr::from_polys(const Poly& num, const Poly& den)
{
    if (den.is_zero()) throw DivisionByZero();
    if (num.is_zero()) return RationalExpr{};
    const Poly g = gcd(num, den);
    Poly n = g.is_constant() ? num : divide_exact(num, g);
    Poly d = g.is_constant() ? den : divide_exact(den, g);
    auto [nn, dd] = normalize_den(std::move(n), std::move(d));
    return RationalExpr(std::move(nn), std::move(dd), true);
}

Rational RationalExpr::constant_value() const
{
    if (!is_constant()) throw std::logic_error("expression is not constant: " + to_string());
    return num_.constant_value() / den_.constant_value();
}

RationalExpr RationalExpr::operator-() const
{
    return RationalExpr(-num_, den_, true);
}

RationalExpr operator+(const RationalExpr& a, const RationalExpr& b)
{
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RationalExpr::from_polys(a.num_ + b.num_, a.den_);
    if (b.den_.is_constant()) return RationalExpr(a.num_ + b.num_ * a.den_, a.den_, true);
    if (a.den_.is_constant()) return RationalExpr(a.num_ * b.den_ + b.num_, b.den_, true);
    // Henrici: with g = gcd(da, db), only g can share factors with the new numerator.
    const Poly g = gcd(a.den_, b.den_);
    const Poly da = divide_exact(a.den_, g), db = divide_exact(b.den_, g);
    Poly t = a.num_ * db + b.num_ * da;
    if (t.is_zero()) return RationalExpr{};
    if (g.is_constant()) {
        auto [n, d] = normalize_den(std::move(t), a.den_ * b.den_);
        return RationalExpr(std::move(n), std::move(d), true);
    }
    const Poly h = gcd(t, g);
    Poly n = h.is_constant() ? std::move(t) : divide_exact(t, h);
    Poly d = da * (h.is_constant() ? b.den_ : divide_exact(b.den_, h));
    auto [nn, dd] = normalize_den(std::move(n), std::move(d));
    return RationalExpr(std::move(nn), std::move(dd), true);
}

RationalExpr operator-(const RationalExpr& a, const RationalExpr& b)
{
    return a + (-b);
}

RationalExpr operator*(const RationalExpr& a, const RationalExpr& b)
{
    if (a.is_zero() || b.is_zero()) return RationalExpr{};
    // Cross-cancel: num_a with den_b and num_b with den_a.
    const Poly g1 = gcd(a.num_, b.den_);
    const Poly g2 = gcd(b.num_, a.den_);
    const auto reduce = [](const Poly& p, const Poly& g) { return g.is_constant() ? p : divide_exact(p, g); };
    auto [n, d] = normalize_den(reduce(a.num_, g1) * reduce(b.num_, g2), reduce(a.den_, g2) * reduce(b.den_, g1));
    return RationalExpr(std::move(n), std::move(d), true);
}

RationalExpr operator/(const RationalExpr& a, const RationalExpr& b)
{
    if (b.is_zero()) throw DivisionByZero();
    auto [n, d] = normalize_den(b.den_, b.num_);
    return a * RationalExpr(std::move(n), std::move(d), true);
}

RationalExpr RationalExpr::pow(int n) const
{
    if (n < 0) {
        if (is_zero()) throw DivisionByZero();
        auto [nn, dd] = normalize_den(den_, num_);
        return RationalExpr(std::move(nn), std::move(dd), true).pow(-n);
    }
    if (n == 0) return RationalExpr(1);
    // Powers of coprime polynomials stay coprime.
    auto [nn, dd] = normalize_den(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)));
    return RationalExpr(std::move(nn), std::move(dd), true);
}

RationalExpr RationalExpr::partial(JetVar v) const
{
    if (!den_.depends_on(v)) return from_polys(num_.derivative(v), den_);
    // (n/d)' = (n' d - n d') / d^2; with g = gcd(d, d') this reduces to
    // (n' (d/g) - n (d'/g)) / (d (d/g)).
    const Poly dd = den_.derivative(v);
    const Poly g = gcd(den_, dd);
    const Poly dg = divide_exact(den_, g);
    const Poly num = num_.derivative(v) * dg - num_ * divide_exact(dd, g);
    return from_polys(num, den_ * dg);
}

Rational RationalExpr::eval(std::span<const Rational, kNumVars> point) const
{
    const Rational d = den_.eval(point);
    if (d == 0) throw SingularPoint();
    return num_.eval(point) / d;
}

RationalExpr RationalExpr::substitute(const std::array<RationalExpr, kNumVars>& values) const
{
    // Put every term over the common denominator prod d_i^E_i with E_i the
    // largest exponent of variable i in num or den; the common factor
    // cancels between the substituted numerator and denominator.
    std::array<unsigned, kNumVars> top{};
    for (std::size_t i = 0; i < kNumVars; ++i)
        top[i] = std::max(num_.degree(kAllVars[i]), den_.degree(kAllVars[i]));

    std::array<std::vector<Poly>, kNumVars> num_pow, den_pow;
    for (std::size_t i = 0; i < kNumVars; ++i) {
        num_pow[i].push_back(Poly(1));
        den_pow[i].push_back(Poly(1));
        for (unsigned k = 1; k <= top[i]; ++k) {
            num_pow[i].push_back(num_pow[i].back() * values[i].numerator());
            den_pow[i].push_back(den_pow[i].back() * values[i].denominator());
        }
    }
    const auto image = [&](const Poly& p) {
        Poly out;
        for (const auto& t : p.terms()) {
            Poly m(t.coef);
            for (std::size_t i = 0; i < kNumVars; ++i) {
                if (top[i] == 0) continue;
                m = m * num_pow[i][t.exp[i]] * den_pow[i][top[i] - t.exp[i]];
            }
            out += m;
        }
        return out;
    };
    return from_polys(image(num_), image(den_));
}

RationalExpr RationalExpr::normalized() const
{
    if (is_zero()) return *this;
    const Rational inv = Rational(1) / num_.leading_coef();
    return RationalExpr(num_.scaled(inv), den_, true);
}

std::string RationalExpr::to_string() const
{
    if (den_ == Poly(1)) return num_.to_string();
    std::string n = num_.to_string();
    if (num_.terms().size() > 1) n = "(" + n + ")";
    return n + "/(" + den_.to_string() + ")";
}

std::ostream& operator<<(std::ostream& os, const RationalExpr& e)
{
    return os << e.to_string();
}

}  // namespace jetlin
