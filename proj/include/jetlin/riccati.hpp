#pragma once

#include <vector>

#include "jetlin/rational_expr.hpp"

namespace jetlin {

/// Rational solutions F(x) of F' = alpha F^2 + beta F + gamma, where the
/// coefficients are functions of x alone.
///
/// Candidates are N/d with deg N <= max_degree and d a product of squarefree
/// factors of the coefficients' denominators and of alpha's numerator, of
/// degree <= max_degree. The search runs over d by increasing degree and then
/// over deg N, so constant solutions come first; within one ansatz, rational
/// roots are taken smallest magnitude first. Each returned F is checked
/// exactly. At most `limit` distinct solutions are returned.
std::vector<RationalExpr> riccati_rational_solutions(const RationalExpr& alpha, const RationalExpr& beta,
                                                     const RationalExpr& gamma, unsigned max_degree,
                                                     std::size_t limit = 8);

}  // namespace jetlin
