#pragma once

#include <string_view>

#include "jetlin/rational_expr.hpp"

namespace jetlin {

/// Parses a rational expression in x, u, u' (alias p) and u'' (alias q).
///
/// Grammar: integer literals, `+ - * / ^` with the usual precedence, unary
/// minus and parentheses. `^` takes an integer literal exponent, optionally
/// signed or parenthesized. Throws ParseError with the offending column.
RationalExpr parse(std::string_view text);

}  // namespace jetlin
