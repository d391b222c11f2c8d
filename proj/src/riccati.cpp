#include "jetlin/riccati.hpp"

#include <algorithm>
#include <map>

#include "jetlin/integrate.hpp"

namespace jetlin {

namespace {

// Polynomial over Q in the unknown numerator coefficients c_0..c_{n-1}.
class MPoly {
public:
    using Mono = std::vector<unsigned>;

    explicit MPoly(std::size_t n) : n_(n) {}
    static MPoly constant(std::size_t n, const Rational& c)
    {
        MPoly out(n);
        out.add(Mono(n), c);
        return out;
    }
    static MPoly variable(std::size_t n, std::size_t i)
    {
        MPoly out(n);
        Mono m(n);
        m[i] = 1;
        out.add(m, Rational(1));
        return out;
    }

    void add(const Mono& m, const Rational& c)
    {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.size() == 1 && degree_of(terms_.begin()->first) == 0; }

    unsigned total_degree() const
    {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, degree_of(m));
        return d;
    }

    std::vector<std::size_t> variables() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_; ++i)
            for (const auto& [m, c] : terms_)
                if (m[i] > 0) {
                    out.push_back(i);
                    break;
                }
        return out;
    }

    // Coefficient of the monomial x_i^k (no other variables).
    Rational pure(std::size_t i, unsigned k) const
    {
        Mono m(n_);
        m[i] = k;
        const auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    MPoly& operator+=(const MPoly& o)
    {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }

    friend MPoly operator*(const MPoly& a, const MPoly& b)
    {
        MPoly out(a.n_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Mono m(a.n_);
                for (std::size_t i = 0; i < a.n_; ++i) m[i] = ma[i] + mb[i];
                out.add(m, ca * cb);
            }
        return out;
    }

    MPoly substitute(std::size_t i, const MPoly& e) const
    {
        MPoly out(n_);
        for (const auto& [m, c] : terms_) {
            Mono rest = m;
            rest[i] = 0;
            MPoly term(n_);
            term.add(rest, c);
            for (unsigned k = 0; k < m[i]; ++k) term = term * e;
            for (const auto& [tm, tc] : term.terms_) out.add(tm, tc);
        }
        return out;
    }

    Rational eval(const std::vector<Rational>& values) const
    {
        Rational out = 0;
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < n_; ++i)
                for (unsigned k = 0; k < m[i]; ++k) t *= values[i];
            out += t;
        }
        return out;
    }

    // -(this - coef * x_i) / coef, for a polynomial of degree one in x_i
    // that is linear overall.
    MPoly solve_for(std::size_t i) const
    {
        const Rational coef = pure(i, 1);
        MPoly out(n_);
        for (const auto& [m, c] : terms_)
            if (m[i] == 0) out.add(m, -c / coef);
        return out;
    }

private:
    static unsigned degree_of(const Mono& m)
    {
        unsigned d = 0;
        for (unsigned e : m) d += e;
        return d;
    }

    std::size_t n_;
    std::map<Mono, Rational> terms_;
};

std::optional<Rational> rational_sqrt(const Rational& r)
{
    if (r < 0) return std::nullopt;
    if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t())) return std::nullopt;
    mpz_class num, den;
    mpz_sqrt(num.get_mpz_t(), r.get_num_mpz_t());
    mpz_sqrt(den.get_mpz_t(), r.get_den_mpz_t());
    Rational out(num, den);
    out.canonicalize();
    return out;
}

// Rational roots of a x^2 + b x + c, smallest magnitude first, positive
// before negative on ties.
std::vector<Rational> rational_roots(const Rational& a, const Rational& b, const Rational& c)
{
    std::vector<Rational> roots;
    if (a == 0) {
        if (b != 0) roots.push_back(-c / b);
    } else if (const auto s = rational_sqrt(b * b - 4 * a * c)) {
        roots.push_back((-b + *s) / (2 * a));
        if (*s != 0) roots.push_back((-b - *s) / (2 * a));
    }
    std::sort(roots.begin(), roots.end(), [](const Rational& x, const Rational& y) {
        const Rational ax = abs(x), ay = abs(y);
        return ax != ay ? ax < ay : x > y;
    });
    return roots;
}

struct Solver {
    std::size_t n;
    std::size_t limit;
    std::vector<std::vector<Rational>> solutions;

    void run(std::vector<MPoly> eqs, std::vector<std::pair<std::size_t, MPoly>> chain)
    {
        if (solutions.size() >= limit) return;
        std::erase_if(eqs, [](const MPoly& e) { return e.is_zero(); });
        for (const auto& e : eqs)
            if (e.is_constant()) return;
        if (eqs.empty()) {
            std::vector<Rational> values(n);
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) values[it->first] = it->second.eval(values);
            solutions.push_back(std::move(values));
            return;
        }
        for (const auto& e : eqs) {
            if (e.total_degree() != 1) continue;
            const std::size_t var = e.variables().front();
            branch(eqs, chain, var, e.solve_for(var));
            return;
        }
        for (const auto& e : eqs) {
            const auto vars = e.variables();
            if (vars.size() != 1 || e.total_degree() > 2) continue;
            const std::size_t var = vars.front();
            for (const Rational& r : rational_roots(e.pure(var, 2), e.pure(var, 1), e.pure(var, 0)))
                branch(eqs, chain, var, MPoly::constant(n, r));
            return;
        }
        // No direct handle: pin the first unknown still present.
        branch(eqs, chain, eqs.front().variables().front(), MPoly::constant(n, 0));
    }

    void branch(const std::vector<MPoly>& eqs, std::vector<std::pair<std::size_t, MPoly>> chain, std::size_t var,
                const MPoly& value)
    {
        std::vector<MPoly> next;
        next.reserve(eqs.size());
        for (const auto& e : eqs) next.push_back(e.substitute(var, value));
        chain.emplace_back(var, value);
        run(std::move(next), std::move(chain));
    }
};

// Coefficients of a polynomial in x alone, index = degree.
std::vector<Rational> dense(const Poly& a)
{
    std::vector<Rational> out(a.degree(JetVar::X) + 1);
    for (const Term& t : a.terms()) out[t.exp[index(JetVar::X)]] += t.coef;
    return out;
}

Poly squarefree_part(const Poly& a)
{
    return divide_exact(a, gcd(a, a.derivative(JetVar::X))).monic();
}

std::vector<Poly> gcd_free_basis(const std::vector<Poly>& inputs)
{
    std::vector<Poly> basis;
    auto insert = [&](const Poly& a) {
        if (a.is_constant()) return;
        const Poly m = a.monic();
        if (std::find(basis.begin(), basis.end(), m) == basis.end()) basis.push_back(m);
    };
    for (const Poly& a : inputs)
        if (!a.is_zero()) insert(squarefree_part(a.monic()));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < basis.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < basis.size() && !changed; ++j) {
                const Poly g = gcd(basis[i], basis[j]);
                if (g.is_constant()) continue;
                const Poly a = divide_exact(basis[i], g), b = divide_exact(basis[j], g);
                basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(j));
                basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
                insert(a);
                insert(b);
                insert(g);
                changed = true;
            }
    }
    return basis;
}

std::vector<Poly> candidate_denominators(const std::vector<Poly>& basis, unsigned max_degree)
{
    std::vector<std::pair<unsigned, Poly>> out{{0, Poly(1)}};
    for (const Poly& b : basis) {
        const unsigned db = b.degree(JetVar::X);
        const std::size_t existing = out.size();
        for (std::size_t k = 0; k < existing; ++k) {
            Poly d = out[k].second;
            for (unsigned deg = out[k].first + db; deg <= max_degree; deg += db) {
                d = d * b;
                out.emplace_back(deg, d);
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Poly> dens;
    for (auto& [deg, d] : out) dens.push_back(std::move(d));
    return dens;
}

}  // namespace

std::vector<RationalExpr> riccati_rational_solutions(const RationalExpr& alpha, const RationalExpr& beta,
                                                     const RationalExpr& gamma, unsigned max_degree, std::size_t limit)
{
    for (const RationalExpr* e : {&alpha, &beta, &gamma})
        for (JetVar v : {JetVar::U, JetVar::P, JetVar::Q})
            if (e->depends_on(v)) return {};

    const Poly common = lcm(lcm(alpha.denominator(), beta.denominator()), gamma.denominator());
    auto cleared = [&](const RationalExpr& e) { return e.numerator() * divide_exact(common, e.denominator()); };
    const Poly a = cleared(alpha), b = cleared(beta), g = cleared(gamma);
    const Poly x = Poly::variable(JetVar::X);
    const std::vector<Poly> basis =
        gcd_free_basis({alpha.denominator(), beta.denominator(), gamma.denominator(), alpha.numerator()});

    const RationalExpr fx = RationalExpr::variable(JetVar::X);
    std::vector<RationalExpr> found;
    for (const Poly& d : candidate_denominators(basis, max_degree)) {
        const Poly dd = d.derivative(JetVar::X);
        for (unsigned deg = 0; deg <= max_degree && found.size() < limit; ++deg) {
            const std::size_t n = deg + 1;
            // d^2 L (F' - alpha F^2 - beta F - gamma) with F = sum c_i x^i / d.
            std::vector<std::pair<std::vector<std::size_t>, Poly>> parts;
            parts.push_back({{}, -(g * d * d)});
            for (std::size_t i = 0; i < n; ++i) {
                const Poly xi = x.pow(static_cast<unsigned>(i));
                Poly lin = -(common * xi * dd) - b * xi * d;
                if (i > 0) lin += (common * x.pow(static_cast<unsigned>(i - 1)) * d).scaled(Rational(static_cast<long>(i)));
                parts.push_back({{i}, lin});
                for (std::size_t j = i; j < n; ++j)
                    parts.push_back({{i, j}, -(a * x.pow(static_cast<unsigned>(i + j))).scaled(Rational(i == j ? 1 : 2))});
            }
            std::vector<MPoly> eqs;
            for (const auto& [vars, poly] : parts) {
                const std::vector<Rational> c = dense(poly);
                if (eqs.size() < c.size()) eqs.resize(c.size(), MPoly(n));
                MPoly mono = MPoly::constant(n, 1);
                for (std::size_t v : vars) mono = mono * MPoly::variable(n, v);
                for (std::size_t k = 0; k < c.size(); ++k)
                    if (c[k] != 0) eqs[k] += mono * MPoly::constant(n, c[k]);
            }
            Solver solver{n, limit, {}};
            solver.run(std::move(eqs), {});
            for (const auto& sol : solver.solutions) {
                RationalExpr num;
                for (std::size_t i = n; i-- > 0;) num = num * fx + sol[i];
                const RationalExpr f = num / RationalExpr(d);
                if (std::find(found.begin(), found.end(), f) != found.end()) continue;
                if (f.partial(JetVar::X) != (alpha * f + beta) * f + gamma) continue;
                found.push_back(f);
                if (found.size() >= limit) return found;
            }
        }
    }
    return found;
}

}  // namespace jetlin
