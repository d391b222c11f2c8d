#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace jetlin {

using Rational = mpq_class;

/// Coordinates of second-order jet space. p stands for u', q for u''.
enum class JetVar : std::uint8_t { X = 0, U = 1, P = 2, Q = 3 };

inline constexpr std::size_t kNumVars = 4;
inline constexpr std::array<JetVar, kNumVars> kAllVars{JetVar::X, JetVar::U, JetVar::P, JetVar::Q};

constexpr std::size_t index(JetVar v) noexcept { return static_cast<std::size_t>(v); }
const char* name(JetVar v) noexcept;

using Exponents = std::array<std::uint32_t, kNumVars>;

/// Graded lexicographic comparison; returns true when `a` sorts strictly
/// above `b` (higher total degree first, then larger x, u, p, q exponent).
bool grlex_greater(const Exponents& a, const Exponents& b) noexcept;

struct Term {
    Exponents exp{};
    Rational coef;

    friend bool operator==(const Term& a, const Term& b) { return a.exp == b.exp && a.coef == b.coef; }
};

/// Sparse multivariate polynomial over Q in (x, u, p, q).
///
/// Terms are kept sorted in descending graded-lex order with no zero
/// coefficients, so structural equality coincides with equality of
/// polynomials.
class Poly {
public:
    Poly() = default;
    explicit Poly(const Rational& c);
    explicit Poly(long c) : Poly(Rational(c)) {}

    static Poly variable(JetVar v);
    static Poly monomial(const Exponents& e, const Rational& c);
    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    static Poly from_terms(std::vector<Term> terms);

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    bool is_monomial() const noexcept { return terms_.size() == 1; }
    /// Constant term value, zero when absent.
    Rational constant_value() const;

    const std::vector<Term>& terms() const noexcept { return terms_; }
    const Term& leading() const { return terms_.front(); }
    const Rational& leading_coef() const { return terms_.front().coef; }

    unsigned degree(JetVar v) const noexcept;
    unsigned total_degree() const noexcept;
    bool depends_on(JetVar v) const noexcept { return degree(v) > 0; }
    /// Componentwise minimum exponent over all terms (the monomial content).
    Exponents min_exponents() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b) = default;

    Poly scaled(const Rational& c) const;
    Poly shifted(const Exponents& e) const;  // multiply by x^e
    Poly pow(unsigned n) const;
    Poly derivative(JetVar v) const;
    /// Divides by the leading coefficient; the zero polynomial is returned unchanged.
    Poly monic() const;

    Rational eval(std::span<const Rational, kNumVars> point) const;

    /// Coefficients with respect to `v`: result[k] multiplies v^k and does not contain v.
    std::vector<Poly> coefficients(JetVar v) const;
    static Poly from_coefficients(JetVar v, const std::vector<Poly>& coeffs);

    std::string to_string() const;

private:
    std::vector<Term> terms_;
};

/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<Poly> try_divide(const Poly& a, const Poly& b);
/// Exact quotient; throws std::logic_error if b does not divide a.
Poly divide_exact(const Poly& a, const Poly& b);

/// Monic greatest common divisor; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

/// Pseudo-remainder of a by b with respect to v: the r in
/// lc(b)^(deg a - deg b + 1) a = q b + r.
Poly pseudo_remainder(const Poly& a, const Poly& b, JetVar v);

/// gcd of the coefficients of `a` viewed as a polynomial in v.
Poly content(const Poly& a, JetVar v);

}  // namespace jetlin
