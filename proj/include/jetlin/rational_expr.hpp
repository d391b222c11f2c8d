#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>

#include "jetlin/poly.hpp"

namespace jetlin {

/// Exact rational function num/den in the jet variables (x, u, p, q).
///
/// Always canonical: gcd(num, den) = 1 and den has leading coefficient 1 in
/// graded-lex order, with zero represented as 0/1. Two values denote the
/// same function iff they compare equal.
class RationalExpr {
public:
    RationalExpr() : den_(1) {}
    RationalExpr(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    RationalExpr(long c) : RationalExpr(Rational(c)) {}    // NOLINT(google-explicit-constructor)
    explicit RationalExpr(Poly p) : num_(std::move(p)), den_(1) {}

    static RationalExpr variable(JetVar v) { return RationalExpr(Poly::variable(v)); }
    /// Canonicalizes num/den; throws DivisionByZero when den is zero.
    static RationalExpr from_polys(const Poly& num, const Poly& den);

    const Poly& numerator() const noexcept { return num_; }
    const Poly& denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
    /// Value of a constant expression; throws std::logic_error otherwise.
    Rational constant_value() const;
    bool depends_on(JetVar v) const noexcept { return num_.depends_on(v) || den_.depends_on(v); }

    RationalExpr operator-() const;
    friend RationalExpr operator+(const RationalExpr& a, const RationalExpr& b);
    friend RationalExpr operator-(const RationalExpr& a, const RationalExpr& b);
    friend RationalExpr operator*(const RationalExpr& a, const RationalExpr& b);
    /// Throws DivisionByZero when b is zero.
    friend RationalExpr operator/(const RationalExpr& a, const RationalExpr& b);
    RationalExpr& operator+=(const RationalExpr& o) { return *this = *this + o; }
    RationalExpr& operator-=(const RationalExpr& o) { return *this = *this - o; }
    RationalExpr& operator*=(const RationalExpr& o) { return *this = *this * o; }
    RationalExpr& operator/=(const RationalExpr& o) { return *this = *this / o; }
    friend bool operator==(const RationalExpr& a, const RationalExpr& b) = default;

    /// Integer power; negative exponents invert (and throw on zero).
    RationalExpr pow(int n) const;
    RationalExpr partial(JetVar v) const;

    /// Exact value at (x, u, p, q); throws SingularPoint when den vanishes.
    Rational eval(std::span<const Rational, kNumVars> point) const;

    /// Simultaneous substitution of every jet variable by an expression.
    RationalExpr substitute(const std::array<RationalExpr, kNumVars>& values) const;

    /// Scales so the numerator's leading coefficient is 1 (zero stays zero).
    RationalExpr normalized() const;

    /// Canonical text: expanded numerator over parenthesized expanded
    /// denominator, terms in descending graded-lex order.
    std::string to_string() const;

private:
    RationalExpr(Poly num, Poly den, bool /*already canonical*/) : num_(std::move(num)), den_(std::move(den)) {}

    Poly num_;
    Poly den_;
};

inline RationalExpr partial(const RationalExpr& a, JetVar v) { return a.partial(v); }
inline bool is_zero(const RationalExpr& a) noexcept { return a.is_zero(); }
inline Rational eval(const RationalExpr& a, std::span<const Rational, kNumVars> point) { return a.eval(point); }

std::ostream& operator<<(std::ostream& os, const RationalExpr& e);

inline const RationalExpr kX = RationalExpr::variable(JetVar::X);
inline const RationalExpr kU = RationalExpr::variable(JetVar::U);
inline const RationalExpr kP = RationalExpr::variable(JetVar::P);
inline const RationalExpr kQ = RationalExpr::variable(JetVar::Q);

}  // namespace jetlin
