#pragma once

#include <optional>
#include <vector>

#include "jetlin/rational_expr.hpp"

namespace jetlin {

/// Rational antiderivative of r with respect to v, the other variables held
/// fixed, with zero integration constant. nullopt when the antiderivative
/// needs a logarithm.
std::optional<RationalExpr> antiderivative(const RationalExpr& r, JetVar v);

/// A rational h with h_v / h = r, built as a product of integer powers of
/// factors of r's denominator. nullopt when no such h exists (non-integer
/// residues, or an exponential part). Returns 1 for r = 0.
std::optional<RationalExpr> log_antiderivative(const RationalExpr& r, JetVar v);

/// Solves a x = b over Q by elimination with pivots taken in column order;
/// free unknowns are set to zero. nullopt when inconsistent.
std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

/// Constants c with sum c_k basis_k = target identically in all variables.
std::optional<std::vector<Rational>> solve_combination(const std::vector<RationalExpr>& basis, const RationalExpr& target);

/// Least common multiple, monic.
Poly lcm(const Poly& a, const Poly& b);

}  // namespace jetlin
