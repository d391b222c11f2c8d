#include "jetlin/jet.hpp"

#include <stdexcept>
#include <string>

namespace jetlin {

const char* to_string(Verdict v) noexcept
{
    return v == Verdict::MaximallySymmetric ? "MaximallySymmetric" : "NotMaximallySymmetric";
}

RationalExpr total_derivative(const RationalExpr& g, const RationalExpr& f)
{
    RationalExpr out = g.partial(JetVar::X);
    if (g.depends_on(JetVar::U)) out += kP * g.partial(JetVar::U);
    if (g.depends_on(JetVar::P)) out += kQ * g.partial(JetVar::P);
    if (g.depends_on(JetVar::Q)) out += f * g.partial(JetVar::Q);
    return out;
}

SQuantities s_quantities(const Ode3& ode)
{
    const RationalExpr& f = ode.f;
    const RationalExpr fq = f.partial(JetVar::Q);
    return SQuantities{
        fq,
        2 * fq * fq + 9 * f.partial(JetVar::P) - 3 * total_derivative(fq, f),
        fq.partial(JetVar::Q),
    };
}

InvariantForms invariant_forms(const Ode3& ode)
{
    const RationalExpr& f = ode.f;
    const RationalExpr fu = f.partial(JetVar::U);
    const RationalExpr fp = f.partial(JetVar::P);
    const RationalExpr fq = f.partial(JetVar::Q);
    const RationalExpr fqq = fq.partial(JetVar::Q);
    const RationalExpr fpq = fp.partial(JetVar::Q);
    const RationalExpr fpp = fp.partial(JetVar::P);
    const RationalExpr fuq = fu.partial(JetVar::Q);
    const RationalExpr dfq = total_derivative(fq, f);
    const RationalExpr dfp = total_derivative(fp, f);

    InvariantForms out;
    out.direct[0] = fqq.partial(JetVar::Q);
    out.direct[1] = fqq * fqq + 6 * fpq.partial(JetVar::Q);
    out.direct[2] = 4 * fq * fq * fq + 18 * fq * (fp - dfq) + 9 * total_derivative(dfq, f) - 27 * dfp + 54 * fu;
    out.direct[3] = fqq * (fq * fq + 9 * fp - 3 * dfq) - 9 * fpp + 18 * fuq - 6 * fq * fpq;

    const SQuantities s = s_quantities(ode);
    out.via_s[0] = s.s3.partial(JetVar::Q);
    out.via_s[1] = s.s3 * s.s3 + 6 * s.s3.partial(JetVar::P);
    out.via_s[2] = 2 * s.s1 * s.s2 - 3 * total_derivative(s.s2, f) + 54 * fu;
    out.via_s[3] = s.s3 * (s.s2 - s.s1 * s.s1) - 9 * fpp + 18 * fuq - 6 * s.s1 * s.s1.partial(JetVar::P);
    return out;
}

InvariantReport invariants(const Ode3& ode)
{
    const InvariantForms forms = invariant_forms(ode);
    InvariantReport report;
    for (std::size_t k = 0; k < 4; ++k) {
        if (forms.direct[k] != forms.via_s[k])
            throw std::logic_error("invariant forms disagree for I" + std::to_string(k + 1) + ": " +
                                   forms.direct[k].to_string() + " vs " + forms.via_s[k].to_string());
        report.values[k] = forms.direct[k];
        report.vanishing[k] = forms.direct[k].is_zero();
        if (!report.vanishing[k] && !report.witness) report.witness = static_cast<int>(k) + 1;
    }
    report.verdict = report.witness ? Verdict::NotMaximallySymmetric : Verdict::MaximallySymmetric;
    return report;
}

Verdict classify(const Ode3& ode)
{
    return invariants(ode).verdict;
}

}  // namespace jetlin
