#include "jetlin/synthesis.hpp"

#include <map>

#include "jetlin/errors.hpp"
#include "jetlin/integrate.hpp"
#include "jetlin/riccati.hpp"

namespace jetlin {

const char* to_string(Stage s) noexcept
{
    switch (s) {
    case Stage::A3: return "A3";
    case Stage::A2: return "A2";
    case Stage::A1: return "A1";
    case Stage::Phi: return "PHI";
    case Stage::Psi: return "PSI";
    case Stage::Completion: return "COMPLETION";
    case Stage::Verified: return "VERIFIED";
    }
    return "?";
}

const char* to_string(FailureKind k) noexcept
{
    switch (k) {
    case FailureKind::AnsatzExhausted: return "AnsatzExhausted";
    case FailureKind::RiccatiUnsolved: return "RiccatiUnsolved";
    case FailureKind::CompatibilityViolated: return "CompatibilityViolated";
    case FailureKind::NotExact: return "NotExact";
    case FailureKind::NonrationalAntiderivative: return "NonrationalAntiderivative";
    case FailureKind::CompletionFailed: return "CompletionFailed";
    case FailureKind::HintRejected: return "HintRejected";
    }
    return "?";
}

const char* to_string(SynthesisResult::Outcome o) noexcept
{
    switch (o) {
    case SynthesisResult::Outcome::Success: return "Success";
    case SynthesisResult::Outcome::Partial: return "Partial";
    case SynthesisResult::Outcome::NotApplicable: return "NotApplicable";
    }
    return "?";
}

namespace {

constexpr JetVar X = JetVar::X, U = JetVar::U, P = JetVar::P, Q = JetVar::Q;

// D_x on functions of (x, u).
RationalExpr dhat(const RationalExpr& g)
{
    return g.partial(X) + kP * g.partial(U);
}

std::string paren(const RationalExpr& e)
{
    return "(" + e.to_string() + ")";
}

// "c*s" for display, dropping a unit factor.
std::string scaled(const RationalExpr& c, const std::string& s)
{
    if (c.is_zero()) return "0";
    return c == RationalExpr(1) ? s : paren(c) + "*" + s;
}

// "(c + s)" for display, dropping a zero summand.
std::string shifted(const RationalExpr& c, const std::string& s)
{
    return c.is_zero() ? s : "(" + paren(c) + " + " + s + ")";
}

void record(SynthesisTrace* trace, Stage stage, std::string equation, std::string ansatz, std::string result)
{
    if (trace) trace->steps.push_back({stage, std::move(equation), std::move(ansatz), std::move(result), true});
}

[[noreturn]] void fail(SynthesisTrace* trace, Stage stage, FailureKind kind, const std::string& equation,
                       const std::string& ansatz, const std::string& message)
{
    if (trace) trace->steps.push_back({stage, equation, ansatz, "failed: " + message, false});
    throw StageFailure(stage, kind, message);
}

std::vector<Poly> coefficients_padded(const Poly& a, JetVar v, std::size_t n)
{
    std::vector<Poly> c = a.is_zero() ? std::vector<Poly>{} : a.coefficients(v);
    c.resize(std::max(n, c.size()));
    return c;
}

// Coefficients of e in q; e's denominator must be free of q.
std::vector<RationalExpr> q_coefficients(const RationalExpr& e, std::size_t n)
{
    const RationalExpr den(e.denominator());
    std::vector<RationalExpr> out;
    for (const Poly& c : coefficients_padded(e.numerator(), Q, n)) out.push_back(RationalExpr(c) / den);
    return out;
}

// a(x, u, p) with a_p / a = r1 and (a_x + p a_u) / a = r0, that is
// D_x a = (r1 q + r0) a. Normalized to leading coefficient 1.
std::optional<RationalExpr> log_total(const RationalExpr& r1, const RationalExpr& r0, std::string& why)
{
    const auto h = log_antiderivative(r1, P);
    if (!h) {
        why = "(log a)_p = " + r1.to_string() + " has no rational solution";
        return std::nullopt;
    }
    const RationalExpr rho = r0 - dhat(*h) / *h;
    const RationalExpr rho1 = rho.partial(P);
    const RationalExpr rho0 = rho - kP * rho1;
    if (rho1.depends_on(P) || rho0.depends_on(P)) {
        why = "remainder " + rho.to_string() + " is not affine in p";
        return std::nullopt;
    }
    if (rho0.partial(U) != rho1.partial(X)) {
        why = "exactness check (log a)_xu = (log a)_ux fails";
        return std::nullopt;
    }
    const auto e1 = log_antiderivative(rho0, X);
    if (!e1) {
        why = "(log a)_x = " + rho0.to_string() + " has no rational solution";
        return std::nullopt;
    }
    const RationalExpr rest = rho1 - e1->partial(U) / *e1;
    const auto e2 = log_antiderivative(rest, U);
    if (rest.depends_on(X) || !e2) {
        why = "(log a)_u = " + rho1.to_string() + " has no rational solution";
        return std::nullopt;
    }
    return (*h * *e1 * *e2).normalized();
}

RationalExpr a2_residual(const Ode3& ode, const RationalExpr& a3, const RationalExpr& s2, const RationalExpr& a2)
{
    return total_derivative(a2, ode.f) - a2 * a2 / (2 * a3) + a3 * s2 / 18;
}

// c_x F1_x + c_u F1_u + c_1 F1 + c_2 F1^2 + c_0 = 0 with coefficients in (x, u).
struct F1Equation {
    RationalExpr cx, cu, c1, c2, c0;
};

// New coordinates (z, e) in which a first-order linear equation for F1
// loses its z-derivative: F1 = F(z, e). Expressions in the new coordinates
// use x for z and u for e.
struct Reduction {
    RationalExpr zeta, eta;                       // in terms of (x, u)
    std::array<RationalExpr, kNumVars> inverse;  // x, u in terms of (z, e)

    RationalExpr to_new(const RationalExpr& g) const { return g.substitute(inverse); }
    RationalExpr to_old(const RationalExpr& g) const { return g.substitute({zeta, eta, kP, kQ}); }
};

std::optional<Reduction> reduction_for(const F1Equation& eq)
{
    if (!eq.c2.is_zero() || (eq.cx.is_zero() && eq.cu.is_zero())) return std::nullopt;
    if (eq.cx.is_zero()) return Reduction{kX, kU, {kX, kU, kP, kQ}};
    if (eq.cu.is_zero()) return Reduction{kU, kX, {kU, kX, kP, kQ}};
    const RationalExpr ratio = eq.cu / eq.cx;
    if (!ratio.is_constant()) return std::nullopt;
    // Characteristic variable u - kappa x, integrate along x.
    return Reduction{kU - ratio * kX, kX, {kU, kX + ratio * kU, kP, kQ}};
}

struct RiccatiData {
    // e0 + e1 F + e2 F^2 + e3 F' = 0, functions of the reduced variable.
    std::vector<std::array<RationalExpr, 4>> equations;
};

bool satisfies(const RiccatiData& data, const RationalExpr& f)
{
    const RationalExpr df = f.partial(X);
    for (const auto& e : data.equations)
        if (!(e[0] + e[1] * f + e[2] * f * f + e[3] * df).is_zero()) return false;
    return true;
}

std::string riccati_text(const std::array<RationalExpr, 4>& e)
{
    const RationalExpr alpha = -e[2] / e[3], beta = -e[1] / e[3], gamma = -e[0] / e[3];
    std::string out = "F2' = ";
    bool any = false;
    auto add = [&](const RationalExpr& c, const char* suffix) {
        if (c.is_zero()) return;
        out += (any ? " + " : "") + paren(c) + suffix;
        any = true;
    };
    add(alpha, "*F2^2");
    add(beta, "*F2");
    add(gamma, "");
    if (!any) out += "0";
    return out;
}

}  // namespace

RationalExpr solve_a3(const Ode3& ode, SynthesisTrace* trace)
{
    const RationalExpr fq = ode.f.partial(Q);
    const RationalExpr fqq = fq.partial(Q);
    const RationalExpr rhs = -fq / 3;
    const std::string equation = "D_x(a3) = " + paren(rhs) + "*a3";
    const std::string ansatz = "a3(x,u,p); q-coefficient fixes (log a3)_p, remainder split in p into (log a3)_x, (log a3)_u";
    if (!fqq.partial(Q).is_zero() || fq.denominator().depends_on(Q))
        fail(trace, Stage::A3, FailureKind::AnsatzExhausted, equation, ansatz, "f_q is not affine in q");
    std::string why;
    const auto a3 = log_total(-fqq / 3, -(fq - kQ * fqq) / 3, why);
    if (!a3) fail(trace, Stage::A3, FailureKind::AnsatzExhausted, equation, ansatz, why);
    if (!(total_derivative(*a3, ode.f) - rhs * *a3).is_zero())
        fail(trace, Stage::A3, FailureKind::AnsatzExhausted, equation, ansatz, "residual does not vanish");
    record(trace, Stage::A3, equation, ansatz, "a3 = " + a3->to_string());
    return *a3;
}

RationalExpr solve_a2(const Ode3& ode, const RationalExpr& a3, const SynthesisOptions& options, SynthesisTrace* trace)
{
    const Stage st = Stage::A2;
    const RationalExpr fqq = ode.f.partial(Q).partial(Q);
    const RationalExpr s2 = s_quantities(ode).s2;
    const RationalExpr k = -a3 * fqq / 6;
    const std::string equation = "D_x(a2) = " + paren(1 / (2 * a3)) + "*a2^2 + " + paren(-a3 * s2 / 18);
    std::string ansatz = "a2 = " + paren(k) + "*q + A(x,u,p)";

    // Residual of the a2 equation with A = 0, as a quadratic in q.
    const RationalExpr res0 = a2_residual(ode, a3, s2, k * kQ);
    if (res0.denominator().depends_on(Q) || res0.numerator().degree(Q) > 2)
        fail(trace, st, FailureKind::AnsatzExhausted, equation, ansatz, "residual is not quadratic in q");
    const auto rq = q_coefficients(res0, 3);
    if (!rq[2].is_zero()) fail(trace, st, FailureKind::AnsatzExhausted, equation, ansatz, "q^2 coefficient does not vanish");

    // q^1: A_p = (k / a3) A - rq[1], so A = h (G + F1(x, u)).
    const auto h = log_antiderivative(k / a3, P);
    if (!h) fail(trace, st, FailureKind::AnsatzExhausted, equation, ansatz, "A_p = (k/a3) A has no rational solution");
    const auto g = antiderivative(-rq[1] / *h, P);
    if (!g) fail(trace, st, FailureKind::NonrationalAntiderivative, equation, ansatz, "integral of the q-coefficient in p");
    ansatz = "a2 = " + scaled(k, "q") + " + " + scaled(*h, shifted(*g, "F1(x,u)"));

    // q^0: c0 + c1 F1 + F1_x + p F1_u + c2 F1^2 = 0.
    const RationalExpr hg = *h * *g;
    const RationalExpr c0 = (rq[0] + dhat(hg) - hg * hg / (2 * a3)) / *h;
    const RationalExpr c1 = dhat(*h) / *h - hg / a3;
    const RationalExpr c2 = -*h / (2 * a3);

    auto a2_from = [&](const RationalExpr& f1) { return k * kQ + *h * (*g + f1); };
    auto works = [&](const RationalExpr& a2) { return a2_residual(ode, a3, s2, a2).is_zero(); };

    // Split the q^0 equation in powers of p.
    const Poly common = lcm(lcm(c0.denominator(), c1.denominator()), c2.denominator());
    auto cleared = [&](const RationalExpr& e) { return e.numerator() * divide_exact(common, e.denominator()); };
    const std::array<Poly, 5> parts{common, common * Poly::variable(P), cleared(c1), cleared(c2), cleared(c0)};
    std::size_t len = 0;
    for (const Poly& part : parts) len = std::max<std::size_t>(len, part.degree(P) + 1);
    std::vector<F1Equation> f1_eqs(len);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto c = coefficients_padded(parts[i], P, len);
        for (std::size_t j = 0; j < len; ++j) {
            RationalExpr* slot[] = {&f1_eqs[j].cx, &f1_eqs[j].cu, &f1_eqs[j].c1, &f1_eqs[j].c2, &f1_eqs[j].c0};
            *slot[i] = RationalExpr(c[j]);
        }
    }

    // Eliminating F1^2 between pairs can expose a linear equation.
    const F1Equation* pivot = nullptr;
    for (const auto& eq : f1_eqs)
        if (!eq.c2.is_zero()) {
            pivot = &eq;
            break;
        }
    if (pivot) {
        const F1Equation pv = *pivot;
        const std::size_t count = f1_eqs.size();
        for (std::size_t i = 0; i < count; ++i) {
            const F1Equation& eq = f1_eqs[i];
            if (&eq == pivot || eq.c2.is_zero()) continue;
            const RationalExpr a = pv.c2, b = eq.c2;
            f1_eqs.push_back({eq.cx * a - pv.cx * b, eq.cu * a - pv.cu * b, eq.c1 * a - pv.c1 * b, RationalExpr(0),
                              eq.c0 * a - pv.c0 * b});
        }
    }

    std::optional<Reduction> red;
    std::optional<F1Equation> lin;
    for (const auto& eq : f1_eqs)
        if ((red = reduction_for(eq))) {
            lin = eq;
            break;
        }

    if (!red) {
        // No first-order linear equation: try F1 determined algebraically, then F1 = 0.
        std::vector<RationalExpr> f1_candidates;
        for (const auto& eq : f1_eqs)
            if (eq.cx.is_zero() && eq.cu.is_zero() && eq.c2.is_zero() && !eq.c1.is_zero())
                f1_candidates.push_back(-eq.c0 / eq.c1);
        f1_candidates.emplace_back(0);
        for (const auto& f1 : f1_candidates) {
            const RationalExpr a2 = a2_from(f1);
            if (!works(a2)) continue;
            record(trace, st, equation, ansatz, "F1 = " + f1.to_string() + "; a2 = " + a2.to_string());
            return a2;
        }
        fail(trace, st, FailureKind::AnsatzExhausted, equation, ansatz, "no reducible equation for F1");
    }

    // lin: L F_e + c1 F + c0 = 0 in the new coordinates, F = H (P0 + F2(z)).
    const RationalExpr lcoef = lin->cx * red->eta.partial(X) + lin->cu * red->eta.partial(U);
    const RationalExpr ln = red->to_new(lcoef), gn = red->to_new(lin->c1), en = red->to_new(lin->c0);
    const auto hn = log_antiderivative(-gn / ln, U);
    if (!hn) fail(trace, st, FailureKind::AnsatzExhausted, equation, ansatz, "F1 equation has no rational integrating factor");
    const auto p0n = antiderivative(-en / (ln * *hn), U);
    if (!p0n) fail(trace, st, FailureKind::NonrationalAntiderivative, equation, ansatz, "particular part of F1");
    const RationalExpr hx = red->to_old(*hn), p0x = red->to_old(*p0n);
    const std::string zeta_text = red->zeta.to_string();
    ansatz += "; F1 = " + scaled(hx, shifted(p0x, "F2(" + zeta_text + ")"));

    // The whole q^0 equation as e0 + e1 F2 + e2 F2^2 + e3 F2' = 0.
    const std::array<RationalExpr, 4> e_old{
        c0 + c1 * hx * p0x + dhat(hx * p0x) + c2 * hx * hx * p0x * p0x,
        c1 * hx + dhat(hx) + 2 * c2 * hx * hx * p0x,
        c2 * hx * hx,
        hx * dhat(red->zeta),
    };
    std::array<RationalExpr, 4> e_new;
    Poly e_common(1);
    for (std::size_t i = 0; i < 4; ++i) {
        e_new[i] = red->to_new(e_old[i]);
        e_common = lcm(e_common, e_new[i].denominator());
    }
    std::map<std::pair<unsigned, unsigned>, std::array<std::vector<Term>, 4>> split;
    for (std::size_t i = 0; i < 4; ++i) {
        const Poly num = e_new[i].numerator() * divide_exact(e_common, e_new[i].denominator());
        for (const Term& t : num.terms())
            split[{t.exp[index(U)], t.exp[index(P)]}][i].push_back(Term{{t.exp[index(X)], 0, 0, 0}, t.coef});
    }
    RiccatiData data;
    for (auto& [key, terms] : split) {
        std::array<RationalExpr, 4> eq;
        for (std::size_t i = 0; i < 4; ++i) eq[i] = RationalExpr(Poly::from_terms(std::move(terms[i])));
        data.equations.push_back(eq);
    }

    std::vector<RationalExpr> candidates;
    std::string f2_equation = "F2 free";
    std::string f2_ansatz = "x stands for the reduced variable " + zeta_text;
    FailureKind empty_kind = FailureKind::AnsatzExhausted;
    const std::array<RationalExpr, 4>* ode_eq = nullptr;
    for (const auto& eq : data.equations)
        if (!eq[3].is_zero()) {
            ode_eq = &eq;
            break;
        }
    if (ode_eq) f2_equation = riccati_text(*ode_eq);
    if (options.hints.f2) {
        candidates.push_back(*options.hints.f2);
        f2_ansatz += "; hint";
        empty_kind = FailureKind::HintRejected;
    } else if (ode_eq && (*ode_eq)[2].is_zero()) {
        const auto& e = *ode_eq;
        const auto hh = log_antiderivative(-e[1] / e[3], X);
        const auto part = hh ? antiderivative(-e[0] / (e[3] * *hh), X) : std::nullopt;
        if (part) candidates.push_back(*hh * *part);
        f2_ansatz += "; linear, integration constant 0";
    } else if (ode_eq) {
        const auto& e = *ode_eq;
        candidates = riccati_rational_solutions(-e[2] / e[3], -e[1] / e[3], -e[0] / e[3], options.riccati_degree);
        f2_ansatz += "; F2 = N(x)/d(x), deg N, deg d <= " + std::to_string(options.riccati_degree);
        empty_kind = FailureKind::RiccatiUnsolved;
    } else {
        for (const auto& e : data.equations)
            if (e[2].is_zero() && !e[1].is_zero()) candidates.push_back(-e[0] / e[1]);
        candidates.emplace_back(0);
    }

    for (const auto& f2 : candidates) {
        if (f2.depends_on(U) || f2.depends_on(P) || f2.depends_on(Q) || !satisfies(data, f2)) continue;
        const RationalExpr a2 = a2_from(hx * (p0x + f2.substitute({red->zeta, kU, kP, kQ})));
        if (!works(a2)) continue;
        record(trace, st, f2_equation, f2_ansatz, "F2 = " + f2.to_string());
        record(trace, st, equation, ansatz, "a2 = " + a2.to_string());
        return a2;
    }
    if (trace) trace->steps.push_back({st, f2_equation, f2_ansatz, "failed: no candidate solves the reduced equation", false});
    throw StageFailure(st, empty_kind,
                       empty_kind == FailureKind::HintRejected ? "F2 hint does not solve the reduced equation"
                                                               : "no rational F2 within the search bound");
}

RationalExpr solve_a1(const Ode3& ode, const RationalExpr& a2, const RationalExpr& a3, SynthesisTrace* trace)
{
    const RationalExpr ratio = a2 / a3;
    const std::string equation = "D_x(a1) = " + paren(ratio) + "*a1";
    const std::string ansatz = "a1(x,u,p); q-coefficient fixes (log a1)_p, remainder split in p into (log a1)_x, (log a1)_u";
    const RationalExpr r1 = ratio.partial(Q);
    if (r1.depends_on(Q)) fail(trace, Stage::A1, FailureKind::AnsatzExhausted, equation, ansatz, "a2/a3 is not affine in q");
    std::string why;
    const auto a1 = log_total(r1, ratio - kQ * r1, why);
    if (!a1) fail(trace, Stage::A1, FailureKind::AnsatzExhausted, equation, ansatz, why);
    if (!(total_derivative(*a1, ode.f) - ratio * *a1).is_zero())
        fail(trace, Stage::A1, FailureKind::AnsatzExhausted, equation, ansatz, "residual does not vanish");
    if (!(*a1 / a3).partial(P).partial(P).is_zero())
        fail(trace, Stage::A1, FailureKind::CompatibilityViolated, equation, ansatz, "(a1/a3)_pp does not vanish");
    if (!(*a1 * *a1 / a3).partial(P).is_zero())
        fail(trace, Stage::A1, FailureKind::CompatibilityViolated, equation, ansatz, "(a1^2/a3)_p does not vanish");
    record(trace, Stage::A1, equation, ansatz, "a1 = " + a1->to_string());
    return *a1;
}

RationalExpr solve_phi(const RationalExpr& a1, const RationalExpr& a3, SynthesisTrace* trace)
{
    const RationalExpr ratio = a1 / a3;
    const std::string equation = "phi_x + p*phi_u = " + paren(ratio);
    const std::string ansatz = "phi(x,u); antidifferentiate phi_x in x, then the x-free remainder of phi_u in u";
    const RationalExpr r1 = ratio.partial(P);
    const RationalExpr r0 = ratio - kP * r1;
    if (r1.depends_on(P) || r0.depends_on(P) || ratio.depends_on(Q))
        fail(trace, Stage::Phi, FailureKind::NotExact, equation, ansatz, "a1/a3 is not affine in p");
    if (r0.partial(U) != r1.partial(X))
        fail(trace, Stage::Phi, FailureKind::NotExact, equation, ansatz, "cross-derivative check fails");
    const auto phi0 = antiderivative(r0, X);
    if (!phi0) fail(trace, Stage::Phi, FailureKind::NonrationalAntiderivative, equation, ansatz, "phi_x needs a logarithm");
    const auto phi1 = antiderivative(r1 - phi0->partial(U), U);
    if (!phi1) fail(trace, Stage::Phi, FailureKind::NonrationalAntiderivative, equation, ansatz, "phi_u needs a logarithm");
    const RationalExpr phi = *phi0 + *phi1;
    if (dhat(phi) != ratio) fail(trace, Stage::Phi, FailureKind::NotExact, equation, ansatz, "residual does not vanish");
    record(trace, Stage::Phi, equation, ansatz, "phi = " + phi.to_string());
    return phi;
}

RationalExpr solve_psi(const Ode3& ode, const RationalExpr& phi, const RationalExpr& a1, const RationalExpr& a3,
                       const SynthesisOptions& options, SynthesisTrace* trace)
{
    const RationalExpr j = a1 * a1 / a3;
    const RationalExpr phx = phi.partial(X), phu = phi.partial(U);
    const std::string equation = paren(phx) + "*psi_u - " + paren(phu) + "*psi_x = " + paren(j);
    const auto n = static_cast<int>(options.max_degree);

    RationalExpr psi;
    std::string ansatz;
    if (j.depends_on(P) || j.depends_on(Q))
        fail(trace, Stage::Psi, FailureKind::CompatibilityViolated, equation, "-", "a1^2/a3 depends on p");
    if (options.hints.psi) {
        ansatz = "hint";
        psi = *options.hints.psi;
        const RationalExpr r = phx * psi.partial(U) - phu * psi.partial(X) - j;
        if (psi.depends_on(P) || psi.depends_on(Q) || !r.is_zero())
            fail(trace, Stage::Psi, FailureKind::HintRejected, equation, ansatz, "residual " + r.to_string());
    } else if (phu.is_zero()) {
        ansatz = "psi_u = J/phi_x integrated in u, zero integration function";
        const auto s = antiderivative(j / phx, U);
        if (!s) fail(trace, Stage::Psi, FailureKind::NonrationalAntiderivative, equation, ansatz, "psi_u needs a logarithm");
        psi = *s;
    } else {
        // Polynomials first; then the same monomials over powers of the
        // denominators that phi and the right-hand side bring in.
        const Poly& dj = j.denominator();
        const Poly dj_free = dj.is_constant() ? dj : divide_exact(dj, gcd(dj, gcd(dj.derivative(X), dj.derivative(U))));
        const RationalExpr dphi(lcm(phi.denominator(), dj_free));
        ansatz = "psi = polynomial in x, u of total degree <= " + std::to_string(n);
        if (!dphi.is_constant()) ansatz += ", also divided by " + paren(dphi) + "^k, k = 1, 2";
        std::vector<RationalExpr> monomials, images;
        for (int k = 0; k <= (dphi.is_constant() ? 0 : 2); ++k)
            for (int d = k == 0 ? 1 : 0; d <= n; ++d)
                for (int i = d; i >= 0; --i) {
                    const RationalExpr m = kX.pow(i) * kU.pow(d - i) / dphi.pow(k);
                    monomials.push_back(m);
                    images.push_back(phx * m.partial(U) - phu * m.partial(X));
                }
        const auto c = solve_combination(images, j);
        if (!c) fail(trace, Stage::Psi, FailureKind::AnsatzExhausted, equation, ansatz, "no solution in the candidate basis");
        for (std::size_t i = 0; i < monomials.size(); ++i) psi += (*c)[i] * monomials[i];
    }
    record(trace, Stage::Psi, equation, ansatz, "psi = " + psi.to_string());

    const RationalExpr residual = linearization_residual(ode, phi, psi);
    if (residual.is_zero()) return psi;

    // psi -> psi + g keeps the Jacobian equation when g depends on phi only;
    // the linearization residual is linear in psi.
    const bool fibre = phu.is_zero();
    const std::string base = fibre ? "x" : paren(phi);
    const std::string completion_eq = "A + B*f = 0 for psi + g, with A + B*f = " + residual.to_string() + " at g = 0";
    const std::string completion_ansatz =
        "g = sum c_k*" + base + "^k, " + std::to_string(-n) + " <= k <= " + std::to_string(n) + ", k != 0";
    std::vector<RationalExpr> basis, images;
    for (int k = -n; k <= n; ++k) {
        if (k == 0) continue;
        basis.push_back((fibre ? kX : phi).pow(k));
        images.push_back(linearization_residual(ode, phi, basis.back()));
    }
    const auto c = solve_combination(images, -residual);
    if (!c) fail(trace, Stage::Completion, FailureKind::CompletionFailed, completion_eq, completion_ansatz, "no correction verifies");
    RationalExpr g;
    for (std::size_t i = 0; i < basis.size(); ++i) g += (*c)[i] * basis[i];
    psi += g;
    if (!linearization_residual(ode, phi, psi).is_zero())
        fail(trace, Stage::Completion, FailureKind::CompletionFailed, completion_eq, completion_ansatz, "corrected psi does not verify");
    record(trace, Stage::Completion, completion_eq, completion_ansatz, "g = " + g.to_string() + "; psi = " + psi.to_string());
    return psi;
}

namespace {

void accept_hint(SynthesisTrace& trace, Stage stage, const std::string& equation, const RationalExpr& value,
                 const RationalExpr& residual, const std::string& name)
{
    if (!residual.is_zero()) fail(&trace, stage, FailureKind::HintRejected, equation, "hint", "residual " + residual.to_string());
    record(&trace, stage, equation, "hint", name + " = " + value.to_string());
}

}  // namespace

SynthesisResult synthesize(const Ode3& ode, const SynthesisOptions& options)
{
    SynthesisResult out;
    out.invariants = invariants(ode);
    if (out.invariants.verdict != Verdict::MaximallySymmetric) {
        out.outcome = SynthesisResult::Outcome::NotApplicable;
        return out;
    }
    out.outcome = SynthesisResult::Outcome::Partial;
    const Hints& hints = options.hints;
    try {
        const RationalExpr fq = ode.f.partial(Q);
        if (hints.a3) {
            const RationalExpr& a3 = *hints.a3;
            if (a3.is_zero() || a3.depends_on(Q))
                fail(&out.trace, Stage::A3, FailureKind::HintRejected, "D_x(a3) = (-1/3*f_q)*a3", "hint",
                     "a3 must be nonzero and free of q");
            accept_hint(out.trace, Stage::A3, "D_x(a3) = " + paren(-fq / 3) + "*a3", a3,
                        total_derivative(a3, ode.f) + fq * a3 / 3, "a3");
            out.a3 = a3;
        } else {
            out.a3 = solve_a3(ode, &out.trace);
        }

        if (hints.a2) {
            const RationalExpr& a2 = *hints.a2;
            const SQuantities s = s_quantities(ode);
            const std::string eq = "D_x(a2) = " + paren(1 / (2 * *out.a3)) + "*a2^2 + " + paren(-*out.a3 * s.s2 / 18);
            const RationalExpr structure = (a2 + *out.a3 * s.s3 * kQ / 6).partial(Q);
            if (!structure.is_zero())
                fail(&out.trace, Stage::A2, FailureKind::HintRejected, eq, "hint",
                     "a2 + (1/6)*a3*f_qq*q depends on q: " + structure.to_string());
            accept_hint(out.trace, Stage::A2, eq, a2, a2_residual(ode, *out.a3, s.s2, a2), "a2");
            out.a2 = a2;
        } else {
            out.a2 = solve_a2(ode, *out.a3, options, &out.trace);
        }

        out.a1 = solve_a1(ode, *out.a2, *out.a3, &out.trace);

        if (hints.phi) {
            const RationalExpr& phi = *hints.phi;
            const RationalExpr ratio = *out.a1 / *out.a3;
            const std::string eq = "phi_x + p*phi_u = " + paren(ratio);
            if (phi.depends_on(P) || phi.depends_on(Q))
                fail(&out.trace, Stage::Phi, FailureKind::HintRejected, eq, "hint", "phi must depend on x and u only");
            accept_hint(out.trace, Stage::Phi, eq, phi, dhat(phi) - ratio, "phi");
            out.phi = phi;
        } else {
            out.phi = solve_phi(*out.a1, *out.a3, &out.trace);
        }

        out.psi = solve_psi(ode, *out.phi, *out.a1, *out.a3, options, &out.trace);

        const std::string eq = "ubar''' = 0 under xbar = " + out.phi->to_string() + ", ubar = " + out.psi->to_string();
        PointTransform t(*out.phi, *out.psi);
        if (!verify(ode, t))
            fail(&out.trace, Stage::Verified, FailureKind::CompletionFailed, eq, "-", "transformation does not verify");
        record(&out.trace, Stage::Verified, eq, "-", "A + B*f = 0");
        out.transform = std::move(t);
        out.outcome = SynthesisResult::Outcome::Success;
    } catch (const StageFailure& e) {
        out.blocking_stage = e.stage();
        out.failure = e.kind();
        out.message = e.what();
    } catch (const DegenerateTransform& e) {
        out.blocking_stage = Stage::Verified;
        out.failure = FailureKind::CompletionFailed;
        out.message = e.what();
    }
    return out;
}

}  // namespace jetlin
