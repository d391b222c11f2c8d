#include "jetlin/integrate.hpp"

#include <map>

namespace jetlin {

namespace {

using Coeffs = std::vector<RationalExpr>;  // univariate in v, index = degree

Coeffs coeffs_of(const Poly& a, JetVar v)
{
    Coeffs out;
    for (const Poly& c : a.coefficients(v)) out.emplace_back(c);
    return out;
}

RationalExpr assemble(const Coeffs& c, JetVar v)
{
    RationalExpr out;
    const RationalExpr var = RationalExpr::variable(v);
    for (std::size_t k = c.size(); k-- > 0;) out = out * var + c[k];
    return out;
}

void trim(Coeffs& c)
{
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

// Division with remainder over the field of functions of the other variables.
Coeffs divide_in_place(Coeffs& rem, const Coeffs& d)
{
    trim(rem);
    if (rem.size() < d.size()) return {};
    Coeffs quot(rem.size() - d.size() + 1);
    while (rem.size() >= d.size()) {
        const std::size_t shift = rem.size() - d.size();
        const RationalExpr factor = rem.back() / d.back();
        quot[shift] = factor;
        for (std::size_t i = 0; i < d.size(); ++i) rem[i + shift] -= factor * d[i];
        rem.pop_back();
        trim(rem);
    }
    return quot;
}

RationalExpr integrate_polynomial(const Coeffs& c, JetVar v)
{
    Coeffs out(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) out[k + 1] = c[k] / RationalExpr(Rational(static_cast<long>(k + 1)));
    return assemble(out, v);
}

// Unique solution of a square nonsingular system over the rational
// function field; nullopt if singular.
std::optional<Coeffs> solve_square(std::vector<Coeffs> a, Coeffs b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col].is_zero()) continue;
            const RationalExpr factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    Coeffs x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace

Poly lcm(const Poly& a, const Poly& b)
{
    return divide_exact(a * b, gcd(a, b)).monic();
}

std::optional<RationalExpr> antiderivative(const RationalExpr& r, JetVar v)
{
    const RationalExpr var = RationalExpr::variable(v);
    if (!r.depends_on(v)) return r * var;
    const Poly& den = r.denominator();
    if (!den.depends_on(v)) {
        std::vector<Term> terms;
        for (Term t : r.numerator().terms()) {
            t.coef /= ++t.exp[index(v)];
            terms.push_back(std::move(t));
        }
        return RationalExpr::from_polys(Poly::from_terms(std::move(terms)), den);
    }

    Coeffs rem = coeffs_of(r.numerator(), v);
    const Coeffs d = coeffs_of(den, v);
    const RationalExpr poly_part = integrate_polynomial(divide_in_place(rem, d), v);
    if (rem.empty()) return poly_part;

    // Horowitz-Ostrogradsky: rem/den = (P/dm)' + Q/ds with ds squarefree.
    const Poly dm = gcd(den, den.derivative(v));
    const Poly ds = divide_exact(den, dm);
    const Poly t = divide_exact(ds * dm.derivative(v), dm);
    const unsigned m = dm.degree(v), n = ds.degree(v), size = m + n;
    if (m == 0) return std::nullopt;  // squarefree: a nonzero proper part is purely logarithmic

    std::vector<Coeffs> a(size, Coeffs(size));
    auto put = [&](std::size_t col, const Poly& column) {
        const Coeffs c = coeffs_of(column, v);
        for (std::size_t k = 0; k < c.size() && k < size; ++k) a[k][col] = c[k];
    };
    const Poly vp = Poly::variable(v);
    for (unsigned j = 0; j < m; ++j) {
        Poly column = -(vp.pow(j) * t);
        if (j > 0) column += (vp.pow(j - 1) * ds).scaled(Rational(static_cast<long>(j)));
        put(j, column);
    }
    for (unsigned j = 0; j < n; ++j) put(m + j, vp.pow(j) * dm);
    Coeffs b(size);
    for (std::size_t k = 0; k < rem.size(); ++k) b[k] = rem[k];

    const auto sol = solve_square(std::move(a), std::move(b));
    if (!sol) return std::nullopt;
    for (unsigned j = 0; j < n; ++j)
        if (!(*sol)[m + j].is_zero()) return std::nullopt;
    const Coeffs p(sol->begin(), sol->begin() + m);
    return poly_part + assemble(p, v) / RationalExpr(dm);
}

std::optional<RationalExpr> log_antiderivative(const RationalExpr& r, JetVar v)
{
    if (r.is_zero()) return RationalExpr(1);
    if (!r.depends_on(v)) return std::nullopt;
    const Poly& num = r.numerator();
    const Poly& den = r.denominator();
    const Poly c = content(den, v);
    const Poly pp = divide_exact(den, c);
    if (num.degree(v) >= pp.degree(v)) return std::nullopt;
    const Poly dv = den.derivative(v);
    if (gcd(pp, pp.derivative(v)).depends_on(v)) return std::nullopt;

    // Rothstein-Trager with integer residues m: the factor of pp where the
    // residue is m is gcd(pp, num - m den_v).
    constexpr long kMaxResidue = 24;
    RationalExpr h(1);
    unsigned found = 0;
    for (long k = 1; k <= 2 * kMaxResidue && found < pp.degree(v); ++k) {
        const long m = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
        const Poly g = gcd(pp, num - dv.scaled(Rational(m)));
        if (!g.depends_on(v)) continue;
        found += g.degree(v);
        h *= RationalExpr(g).pow(static_cast<int>(m));
    }
    if (found != pp.degree(v)) return std::nullopt;
    if (h.partial(v) / h != r) return std::nullopt;
    return h;
}

std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a.front().size();
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        std::swap(b[pivot], b[rank]);
        const Rational inv = 1 / a[rank][col];
        for (std::size_t k = col; k < cols; ++k) a[rank][k] *= inv;
        b[rank] *= inv;
        for (std::size_t row = 0; row < rows; ++row) {
            if (row == rank || a[row][col] == 0) continue;
            const Rational factor = a[row][col];
            for (std::size_t k = col; k < cols; ++k) a[row][k] -= factor * a[rank][k];
            b[row] -= factor * b[rank];
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    for (std::size_t row = rank; row < rows; ++row)
        if (b[row] != 0) return std::nullopt;
    std::vector<Rational> x(cols);
    for (std::size_t i = 0; i < rank; ++i) x[pivot_cols[i]] = b[i];
    return x;
}

std::optional<std::vector<Rational>> solve_combination(const std::vector<RationalExpr>& basis, const RationalExpr& target)
{
    Poly common = target.denominator();
    for (const auto& e : basis) common = lcm(common, e.denominator());
    auto scaled_numerator = [&](const RationalExpr& e) { return e.numerator() * divide_exact(common, e.denominator()); };

    std::map<Exponents, std::size_t> row_of;
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    auto row = [&](const Exponents& e) {
        auto [it, inserted] = row_of.emplace(e, a.size());
        if (inserted) {
            a.emplace_back(basis.size());
            b.emplace_back();
        }
        return it->second;
    };
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const Poly num = scaled_numerator(basis[k]);
        for (const Term& t : num.terms()) {
            const std::size_t r = row(t.exp);
            a[r][k] = t.coef;
        }
    }
    const Poly target_num = scaled_numerator(target);
    for (const Term& t : target_num.terms()) {
        const std::size_t r = row(t.exp);
        b[r] = t.coef;
    }
    if (a.empty()) return std::vector<Rational>(basis.size());
    return solve_linear(std::move(a), std::move(b));
}

}  // namespace jetlin
