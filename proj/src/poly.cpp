#include "jetlin/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace jetlin {

const char* name(JetVar v) noexcept
{
    switch (v) {
    case JetVar::X: return "x";
    case JetVar::U: return "u";
    case JetVar::P: return "p";
    case JetVar::Q: return "q";
    }
    return "?";
}

namespace {

std::uint32_t total(const Exponents& e) noexcept
{
    std::uint32_t s = 0;
    for (auto k : e) s += k;
    return s;
}

struct GrlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const noexcept { return grlex_greater(a, b); }
};

bool divides(const Exponents& a, const Exponents& b) noexcept
{
    for (std::size_t i = 0; i < kNumVars; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Exponents minus(const Exponents& a, const Exponents& b) noexcept
{
    Exponents r{};
    for (std::size_t i = 0; i < kNumVars; ++i) r[i] = a[i] - b[i];
    return r;
}

Exponents plus(const Exponents& a, const Exponents& b) noexcept
{
    Exponents r{};
    for (std::size_t i = 0; i < kNumVars; ++i) r[i] = a[i] + b[i];
    return r;
}

// Merge two sorted term lists, b scaled by `sign`.
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, int sign)
{
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && grlex_greater(a[i].exp, b[j].exp))) {
            out.push_back(a[i++]);
        } else if (i == a.size() || grlex_greater(b[j].exp, a[i].exp)) {
            out.push_back(b[j++]);
            if (sign < 0) out.back().coef = -out.back().coef;
        } else {
            Rational c = sign < 0 ? Rational(a[i].coef - b[j].coef) : Rational(a[i].coef + b[j].coef);
            if (c != 0) out.push_back(Term{a[i].exp, std::move(c)});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

bool grlex_greater(const Exponents& a, const Exponents& b) noexcept
{
    auto ta = total(a), tb = total(b);
    if (ta != tb) return ta > tb;
    return a > b;
}

Poly::Poly(const Rational& c)
{
    if (c != 0) terms_.push_back(Term{Exponents{}, c});
}

Poly Poly::variable(JetVar v)
{
    Exponents e{};
    e[index(v)] = 1;
    return monomial(e, Rational(1));
}

Poly Poly::monomial(const Exponents& e, const Rational& c)
{
    Poly p;
    if (c != 0) p.terms_.push_back(Term{e, c});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms)
{
    std::map<Exponents, Rational, GrlexGreater> acc;
    for (auto& t : terms) acc[t.exp] += t.coef;
    Poly p;
    p.terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
        if (c != 0) p.terms_.push_back(Term{e, c});
    return p;
}

bool Poly::is_constant() const noexcept
{
    return terms_.empty() || (terms_.size() == 1 && total(terms_[0].exp) == 0);
}

Rational Poly::constant_value() const
{
    if (!terms_.empty() && total(terms_.back().exp) == 0) return terms_.back().coef;
    return Rational(0);
}

unsigned Poly::degree(JetVar v) const noexcept
{
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t.exp[index(v)]);
    return d;
}

unsigned Poly::total_degree() const noexcept
{
    return terms_.empty() ? 0 : total(terms_.front().exp);
}

Exponents Poly::min_exponents() const
{
    if (terms_.empty()) return Exponents{};
    Exponents m = terms_.front().exp;
    for (const auto& t : terms_)
        for (std::size_t i = 0; i < kNumVars; ++i) m[i] = std::min(m[i], t.exp[i]);
    return m;
}

Poly Poly::operator-() const
{
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

Poly& Poly::operator+=(const Poly& o)
{
    terms_ = merge(terms_, o.terms_, +1);
    return *this;
}

Poly& Poly::operator-=(const Poly& o)
{
    terms_ = merge(terms_, o.terms_, -1);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero()) return Poly{};
    if (b.terms_.size() == 1) return a.shifted(b.terms_[0].exp).scaled(b.terms_[0].coef);
    if (a.terms_.size() == 1) return b.shifted(a.terms_[0].exp).scaled(a.terms_[0].coef);
    std::map<Exponents, Rational, GrlexGreater> acc;
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) acc[plus(s.exp, t.exp)] += s.coef * t.coef;
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
        if (c != 0) r.terms_.push_back(Term{e, c});
    return r;
}

Poly Poly::scaled(const Rational& c) const
{
    if (c == 0) return Poly{};
    Poly r = *this;
    if (c != 1)
        for (auto& t : r.terms_) t.coef *= c;
    return r;
}

Poly Poly::shifted(const Exponents& e) const
{
    Poly r = *this;
    for (auto& t : r.terms_) t.exp = plus(t.exp, e);
    return r;
}

Poly Poly::pow(unsigned n) const
{
    Poly result(1);
    Poly base = *this;
    while (n > 0) {
        if (n & 1U) result = result * base;
        n >>= 1U;
        if (n > 0) base = base * base;
    }
    return result;
}

Poly Poly::derivative(JetVar v) const
{
    const auto k = index(v);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (t.exp[k] == 0) continue;
        Term d{t.exp, t.coef * t.exp[k]};
        d.exp[k] -= 1;
        out.push_back(std::move(d));
    }
    // Every surviving term loses one from the same coordinate, so grlex order is kept.
    Poly r;
    r.terms_ = std::move(out);
    return r;
}

Poly Poly::monic() const
{
    if (is_zero()) return *this;
    return scaled(Rational(1) / leading_coef());
}

Rational Poly::eval(std::span<const Rational, kNumVars> point) const
{
    Rational sum(0);
    for (const auto& t : terms_) {
        Rational v = t.coef;
        for (std::size_t i = 0; i < kNumVars; ++i) {
            if (t.exp[i] == 0) continue;
            mpq_class pw;
            mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), t.exp[i]);
            mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), t.exp[i]);
            pw.canonicalize();
            v *= pw;
        }
        sum += v;
    }
    return sum;
}

std::vector<Poly> Poly::coefficients(JetVar v) const
{
    const auto k = index(v);
    std::vector<std::vector<Term>> buckets(degree(v) + 1);
    for (const auto& t : terms_) {
        Term c = t;
        c.exp[k] = 0;
        buckets[t.exp[k]].push_back(std::move(c));
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) {
        // Terms stay in grlex order after zeroing a common coordinate only
        // within a bucket of equal v-exponent, which is what we have here.
        Poly p;
        p.terms_ = std::move(b);
        out.push_back(std::move(p));
    }
    return out;
}

Poly Poly::from_coefficients(JetVar v, const std::vector<Poly>& coeffs)
{
    Poly r;
    Exponents e{};
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        e[index(v)] = static_cast<std::uint32_t>(k);
        r += coeffs[k].shifted(e);
    }
    return r;
}

std::string Poly::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coef;
        if (c < 0) {
            os << '-';
            c = -c;
        } else if (!first) {
            os << '+';
        }
        first = false;
        const bool unit_monomial = total(t.exp) == 0;
        bool wrote = false;
        if (c != 1 || unit_monomial) {
            os << c.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < kNumVars; ++i) {
            if (t.exp[i] == 0) continue;
            if (wrote) os << '*';
            os << name(kAllVars[i]);
            if (t.exp[i] > 1) os << '^' << t.exp[i];
            wrote = true;
        }
    }
    return os.str();
}

std::optional<Poly> try_divide(const Poly& a, const Poly& b)
{
    if (b.is_zero()) throw std::logic_error("polynomial division by zero");
    if (a.is_zero()) return Poly{};
    if (b.is_monomial()) {
        const auto& bt = b.leading();
        std::vector<Term> out;
        out.reserve(a.terms().size());
        const Rational inv = Rational(1) / bt.coef;
        for (const auto& t : a.terms()) {
            if (!divides(bt.exp, t.exp)) return std::nullopt;
            out.push_back(Term{minus(t.exp, bt.exp), t.coef * inv});
        }
        // Dividing every exponent by the same monomial preserves grlex order.
        return Poly::from_terms(std::move(out));
    }
    for (std::size_t i = 0; i < kNumVars; ++i)
        if (b.degree(kAllVars[i]) > a.degree(kAllVars[i])) return std::nullopt;

    const auto& lb = b.leading();
    std::vector<Term> quotient;
    Poly rem = a;
    while (!rem.is_zero()) {
        const auto& lt = rem.leading();
        if (!divides(lb.exp, lt.exp)) return std::nullopt;
        Term q{minus(lt.exp, lb.exp), lt.coef / lb.coef};
        rem -= b.shifted(q.exp).scaled(q.coef);
        quotient.push_back(std::move(q));
    }
    return Poly::from_terms(std::move(quotient));
}

Poly divide_exact(const Poly& a, const Poly& b)
{
    auto q = try_divide(a, b);
    if (!q) throw std::logic_error("inexact polynomial division: (" + a.to_string() + ")/(" + b.to_string() + ")");
    return std::move(*q);
}

Poly pseudo_remainder(const Poly& a, const Poly& b, JetVar v)
{
    const unsigned da = a.degree(v), db = b.degree(v);
    if (da < db) return a;
    const Poly lcb = b.coefficients(v).back();
    Poly r = a;
    Exponents shift{};
    unsigned steps = 0;
    while (!r.is_zero() && r.degree(v) >= db) {
        const unsigned dr = r.degree(v);
        const Poly lcr = r.coefficients(v).back();
        shift[index(v)] = dr - db;
        r = r * lcb - (b * lcr).shifted(shift);
        ++steps;
    }
    // Complete to lc(b)^(da - db + 1) * a = quotient * b + r.
    const unsigned missing = da - db + 1 - steps;
    return missing == 0 ? r : r * lcb.pow(missing);
}

namespace {

Poly gcd_nonmonomial(const Poly& a, const Poly& b);

Poly gcd_of_all(const Poly& start, std::vector<Poly> polys)
{
    std::sort(polys.begin(), polys.end(), [](const Poly& a, const Poly& b) { return a.terms().size() < b.terms().size(); });
    Poly g = start;
    for (const auto& c : polys) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.monic() : gcd(g, c);
        if (g.is_constant() && !g.is_zero()) return Poly(1);
    }
    return g;
}

Poly primitive_part(const Poly& a, JetVar v)
{
    const Poly c = content(a, v);
    return c.is_constant() ? a : divide_exact(a, c);
}

using Dense = std::vector<Rational>;  // univariate, index = degree

void trim(Dense& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Image of a under x_i = point[i] for every variable except main.
Dense specialize(const Poly& a, JetVar main, std::span<const Rational, kNumVars> point)
{
    Dense out(a.degree(main) + 1);
    for (const Term& t : a.terms()) {
        Rational c = t.coef;
        for (JetVar v : kAllVars) {
            if (v == main) continue;
            for (std::uint32_t k = 0; k < t.exp[index(v)]; ++k) c *= point[index(v)];
        }
        out[t.exp[index(main)]] += c;
    }
    trim(out);
    return out;
}

std::size_t dense_gcd_degree(Dense a, Dense b)
{
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        while (a.size() >= b.size()) {
            const Rational factor = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
            a.pop_back();
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

// True when primitive f and g (in main) are certainly coprime: a
// specialization keeping both leading coefficients nonzero can only raise
// the degree of the gcd, so a constant image gcd settles it.
bool certainly_coprime(const Poly& f, const Poly& g, JetVar main)
{
    static constexpr int kPrimes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::array<Rational, kNumVars> point;
        for (std::size_t i = 0; i < kNumVars; ++i) point[i] = kPrimes[(4 * attempt + i) % 12] * (attempt + 1);
        Dense fa = specialize(f, main, point), ga = specialize(g, main, point);
        if (fa.size() != f.degree(main) + 1 || ga.size() != g.degree(main) + 1) continue;
        return dense_gcd_degree(std::move(fa), std::move(ga)) == 0;
    }
    return false;
}

Poly gcd_nonmonomial(const Poly& a, const Poly& b)
{
    // A variable present in only one argument cannot occur in the gcd: the
    // gcd then divides every coefficient with respect to that variable.
    for (JetVar v : kAllVars) {
        const bool in_a = a.depends_on(v), in_b = b.depends_on(v);
        if (in_a && !in_b) return gcd_of_all(b.monic(), a.coefficients(v));
        if (in_b && !in_a) return gcd_of_all(a.monic(), b.coefficients(v));
    }
    // Same variable set in both; pick the main variable of least degree.
    JetVar main = JetVar::X;
    unsigned best = ~0U;
    for (JetVar v : kAllVars) {
        if (!a.depends_on(v)) continue;
        const unsigned d = std::max(a.degree(v), b.degree(v));
        if (d < best) {
            best = d;
            main = v;
        }
    }
    if (best == ~0U) return Poly(1);  // both constant

    const Poly ca = content(a, main), cb = content(b, main);
    const Poly c = gcd(ca, cb);
    Poly f = ca.is_constant() ? a : divide_exact(a, ca);
    Poly g = cb.is_constant() ? b : divide_exact(b, cb);
    if (f.degree(main) < g.degree(main)) std::swap(f, g);
    if (g.degree(main) == 0) return c;
    if (try_divide(f, g)) return (c * g).monic();
    if (certainly_coprime(f, g, main)) return c;
    // Subresultant PRS.
    Poly lead(1), h(1);
    while (true) {
        const unsigned delta = f.degree(main) - g.degree(main);
        Poly r = pseudo_remainder(f, g, main);
        if (r.is_zero()) break;
        if (r.degree(main) == 0) {
            g = Poly(1);
            break;
        }
        f = std::move(g);
        g = divide_exact(r, lead * h.pow(delta));
        lead = f.coefficients(main).back();
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = lead;
        } else {
            h = divide_exact(lead.pow(delta), h.pow(delta - 1));
        }
    }
    g = primitive_part(g, main);
    return (c * g).monic();
}

}  // namespace

Poly content(const Poly& a, JetVar v)
{
    if (!a.depends_on(v)) return a.monic();
    return gcd_of_all(Poly{}, a.coefficients(v));
}

Poly gcd(const Poly& a, const Poly& b)
{
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly(1);
    if (a == b) return a.monic();

    const Exponents ma = a.min_exponents(), mb = b.min_exponents();
    Exponents m{};
    for (std::size_t i = 0; i < kNumVars; ++i) m[i] = std::min(ma[i], mb[i]);
    const Poly mono = Poly::monomial(m, Rational(1));

    if (a.is_monomial() || b.is_monomial()) return mono;

    const Poly ar = divide_exact(a, Poly::monomial(ma, Rational(1)));
    const Poly br = divide_exact(b, Poly::monomial(mb, Rational(1)));
    if (ar.is_constant() || br.is_constant()) return mono;
    return gcd_nonmonomial(ar, br).shifted(m);
}

}  // namespace jetlin
