#pragma once

#include <array>
#include <optional>

#include "jetlin/rational_expr.hpp"

namespace jetlin {

/// The third-order equation u''' = f(x, u, p, q).
struct Ode3 {
    RationalExpr f;
};

enum class Verdict { MaximallySymmetric, NotMaximallySymmetric };

const char* to_string(Verdict v) noexcept;

/// D_x g = g_x + p g_u + q g_p + f g_q: differentiation along solutions of u''' = f.
RationalExpr total_derivative(const RationalExpr& g, const RationalExpr& f);

struct SQuantities {
    RationalExpr s1;  // f_q
    RationalExpr s2;  // 2 f_q^2 + 9 f_p - 3 D_x f_q
    RationalExpr s3;  // f_qq
};

SQuantities s_quantities(const Ode3& ode);

/// The four relative invariants computed two ways: directly from f and
/// derivatives, and through s1, s2, s3.
struct InvariantForms {
    std::array<RationalExpr, 4> direct;
    std::array<RationalExpr, 4> via_s;
};

InvariantForms invariant_forms(const Ode3& ode);

struct InvariantReport {
    std::array<RationalExpr, 4> values;  // I1..I4
    std::array<bool, 4> vanishing{};
    Verdict verdict = Verdict::NotMaximallySymmetric;
    /// 1-based index of the first invariant that does not vanish.
    std::optional<int> witness;

    const RationalExpr& i1() const { return values[0]; }
    const RationalExpr& i2() const { return values[1]; }
    const RationalExpr& i3() const { return values[2]; }
    const RationalExpr& i4() const { return values[3]; }
};

/// Computes I1..I4 and the verdict. Both invariant forms are evaluated and
/// must agree; a mismatch throws std::logic_error.
InvariantReport invariants(const Ode3& ode);

/// MaximallySymmetric iff I1..I4 all vanish identically.
Verdict classify(const Ode3& ode);

}  // namespace jetlin
