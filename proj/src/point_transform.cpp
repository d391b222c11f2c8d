#include "jetlin/point_transform.hpp"

#include "jetlin/errors.hpp"

namespace jetlin {

namespace {

// D_x restricted to functions of (x, u).
RationalExpr dx_point(const RationalExpr& g)
{
    return g.partial(JetVar::X) + kP * g.partial(JetVar::U);
}

// D_x without the q-derivative term: exact on functions of (x, u, p).
RationalExpr dx_no_q(const RationalExpr& g)
{
    return g.partial(JetVar::X) + kP * g.partial(JetVar::U) + kQ * g.partial(JetVar::P);
}

RationalExpr jacobian_of(const RationalExpr& phi, const RationalExpr& psi)
{
    return phi.partial(JetVar::X) * psi.partial(JetVar::U) - phi.partial(JetVar::U) * psi.partial(JetVar::X);
}

}  // namespace

PointTransform::PointTransform(RationalExpr phi, RationalExpr psi) : phi_(std::move(phi)), psi_(std::move(psi))
{
    for (JetVar v : {JetVar::P, JetVar::Q})
        if (phi_.depends_on(v) || psi_.depends_on(v))
            throw DegenerateTransform("point transformation must depend on x and u only");
    jacobian_ = jacobian_of(phi_, psi_);
    if (jacobian_.is_zero()) throw DegenerateTransform("Jacobian phi_x*psi_u - phi_u*psi_x vanishes identically");
    dx_phi_ = dx_point(phi_);
    if (dx_phi_.is_zero()) throw DegenerateTransform("D_x phi vanishes identically");
}

PointTransform compose(const PointTransform& outer, const PointTransform& inner)
{
    const std::array<RationalExpr, kNumVars> sub{inner.phi(), inner.psi(), kP, kQ};
    return PointTransform(outer.phi().substitute(sub), outer.psi().substitute(sub));
}

namespace {

Prolongation prolong_unchecked(const RationalExpr& psi, const RationalExpr& dphi)
{
    Prolongation pr;
    pr.ubar1 = dx_point(psi) / dphi;
    pr.ubar2 = dx_no_q(pr.ubar1) / dphi;
    // D_x ubar2 with u''' left symbolic is affine in it: the q-derivative
    // of ubar2 multiplies u'''.
    pr.a = dx_no_q(pr.ubar2) / dphi;
    pr.b = pr.ubar2.partial(JetVar::Q) / dphi;
    return pr;
}

}  // namespace

Prolongation prolong(const PointTransform& t)
{
    return prolong_unchecked(t.psi(), t.dx_phi());
}

RationalExpr linearization_residual(const Ode3& ode, const PointTransform& t)
{
    const Prolongation pr = prolong(t);
    return pr.a + pr.b * ode.f;
}

RationalExpr linearization_residual(const Ode3& ode, const RationalExpr& phi, const RationalExpr& psi)
{
    const RationalExpr dphi = dx_point(phi);
    if (dphi.is_zero()) throw DegenerateTransform("D_x phi vanishes identically");
    const Prolongation pr = prolong_unchecked(psi, dphi);
    return pr.a + pr.b * ode.f;
}

bool verify(const Ode3& ode, const PointTransform& t)
{
    return linearization_residual(ode, t).is_zero();
}

Ode3 pullback(const RationalExpr& target_f, const PointTransform& t)
{
    const Prolongation pr = prolong(t);
    RationalExpr target = target_f;
    if (!target_f.is_constant()) target = target_f.substitute({t.phi(), t.psi(), pr.ubar1, pr.ubar2});
    return Ode3{(target - pr.a) / pr.b};
}

AuxTriple aux_from_transform(const PointTransform& t, const Ode3& source)
{
    AuxTriple aux;
    aux.a1 = t.jacobian() / t.dx_phi();
    aux.a3 = aux.a1 / t.dx_phi();
    aux.a2 = total_derivative(aux.a1, source.f) / t.dx_phi();
    return aux;
}

bool AuxResiduals::all_zero() const
{
    return a3_equation.is_zero() && a2_equation.is_zero() && a1_equation.is_zero() && affine_in_p.is_zero() &&
           free_of_p.is_zero() && a2_structure.is_zero();
}

AuxResiduals aux_residuals(const Ode3& ode, const AuxTriple& aux)
{
    const RationalExpr& f = ode.f;
    const SQuantities s = s_quantities(ode);
    AuxResiduals r;
    r.a3_equation = total_derivative(aux.a3, f) + Rational(1, 3) * s.s1 * aux.a3;
    r.a2_equation = total_derivative(aux.a2, f) - aux.a2 * aux.a2 / (2 * aux.a3) + Rational(1, 18) * aux.a3 * s.s2;
    r.a1_equation = total_derivative(aux.a1, f) - aux.a2 / aux.a3 * aux.a1;
    r.affine_in_p = (aux.a1 / aux.a3).partial(JetVar::P).partial(JetVar::P);
    r.free_of_p = (aux.a1 * aux.a1 / aux.a3).partial(JetVar::P);
    r.a2_structure = (aux.a2 + Rational(1, 6) * aux.a3 * s.s3 * kQ).partial(JetVar::Q);
    return r;
}

std::array<RationalExpr, 2> transform_residuals(const AuxTriple& aux, const RationalExpr& phi, const RationalExpr& psi)
{
    return {dx_point(phi) - aux.a1 / aux.a3, jacobian_of(phi, psi) - aux.a1 * aux.a1 / aux.a3};
}

}  // namespace jetlin
