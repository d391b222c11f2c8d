#pragma once

#include <array>

#include "jetlin/jet.hpp"
#include "jetlin/rational_expr.hpp"

namespace jetlin {

/// Point transformation xbar = phi(x, u), ubar = psi(x, u).
class PointTransform {
public:
    /// Throws DegenerateTransform if phi or psi depend on p or q, or if the
    /// Jacobian phi_x psi_u - phi_u psi_x or D_x phi vanishes identically.
    PointTransform(RationalExpr phi, RationalExpr psi);

    static PointTransform identity() { return PointTransform(kX, kU); }

    const RationalExpr& phi() const noexcept { return phi_; }
    const RationalExpr& psi() const noexcept { return psi_; }
    const RationalExpr& jacobian() const noexcept { return jacobian_; }
    /// phi_x + p phi_u
    const RationalExpr& dx_phi() const noexcept { return dx_phi_; }

private:
    RationalExpr phi_, psi_, jacobian_, dx_phi_;
};

/// (outer o inner): xbar = outer.phi(inner.phi, inner.psi), likewise for psi.
PointTransform compose(const PointTransform& outer, const PointTransform& inner);

/// Transformed derivatives. Along solutions of u''' = f, ubar''' = a + b f.
struct Prolongation {
    RationalExpr ubar1;  // in x, u, p
    RationalExpr ubar2;  // in x, u, p, q
    RationalExpr a;
    RationalExpr b;
};

Prolongation prolong(const PointTransform& t);

/// a + b f; zero exactly when t maps u''' = f onto ubar''' = 0.
RationalExpr linearization_residual(const Ode3& ode, const PointTransform& t);

/// The same residual for a bare pair, only requiring D_x phi != 0. For
/// fixed phi it is linear in psi, which the synthesis completion relies on.
RationalExpr linearization_residual(const Ode3& ode, const RationalExpr& phi, const RationalExpr& psi);

bool verify(const Ode3& ode, const PointTransform& t);

/// The equation that t maps onto ubar''' = target_f, with target_f written in
/// the barred jet variables. Barred variables are substituted, never inverted.
Ode3 pullback(const RationalExpr& target_f, const PointTransform& t);

struct AuxTriple {
    RationalExpr a1;  // (x, u, p)
    RationalExpr a2;  // (x, u, p, q)
    RationalExpr a3;  // (x, u, p)
};

/// a1 = J / D_x phi, a3 = a1 / D_x phi, a2 = D_x a1 / D_x phi with D_x taken
/// along the source equation.
AuxTriple aux_from_transform(const PointTransform& t, const Ode3& source);

/// Residuals of the auxiliary system; all zero for a consistent triple.
struct AuxResiduals {
    RationalExpr a3_equation;   // D_x a3 + (1/3) f_q a3
    RationalExpr a2_equation;   // D_x a2 - a2^2 / (2 a3) + (1/18) a3 s2
    RationalExpr a1_equation;   // D_x a1 - (a2 / a3) a1
    RationalExpr affine_in_p;   // (a1 / a3)_pp
    RationalExpr free_of_p;     // (a1^2 / a3)_p
    RationalExpr a2_structure;  // (a2 + (1/6) a3 f_qq q)_q

    bool all_zero() const;
};

AuxResiduals aux_residuals(const Ode3& ode, const AuxTriple& aux);

/// Residuals of D_x phi = a1/a3 and phi_x psi_u - phi_u psi_x = a1^2/a3.
std::array<RationalExpr, 2> transform_residuals(const AuxTriple& aux, const RationalExpr& phi, const RationalExpr& psi);

}  // namespace jetlin
