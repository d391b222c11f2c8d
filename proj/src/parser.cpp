#include "jetlin/parser.hpp"

#include <cctype>
#include <string>

#include "jetlin/errors.hpp"

namespace jetlin {

namespace {

constexpr long kMaxExponent = 1000;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    RationalExpr run()
    {
        skip_space();
        if (at_end()) throw ParseError("empty expression", pos_);
        RationalExpr e = expression();
        skip_space();
        if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    RationalExpr expression()
    {
        RationalExpr acc = term();
        while (true) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    RationalExpr term()
    {
        RationalExpr acc = unary();
        while (true) {
            skip_space();
            const std::size_t op = pos_;
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                RationalExpr d = unary();
                if (d.is_zero()) throw ParseError("division by zero", op);
                acc /= d;
            } else {
                return acc;
            }
        }
    }

    RationalExpr unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    RationalExpr power()
    {
        RationalExpr base = primary();
        skip_space();
        const std::size_t op = pos_;
        if (!accept('^')) return base;
        const long n = exponent();
        skip_space();
        if (peek() == '^') throw ParseError("chained '^' is ambiguous; add parentheses", pos_);
        if (n < 0 && base.is_zero()) throw ParseError("division by zero", op);
        return base.pow(static_cast<int>(n));
    }

    long exponent()
    {
        skip_space();
        const std::size_t start = pos_;
        const bool paren = accept('(');
        bool negative = false;
        if (accept('-'))
            negative = true;
        else
            accept('+');
        skip_space();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("non-integer exponent", start);
        long n = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            n = n * 10 + (text_[pos_++] - '0');
            if (n > kMaxExponent) throw ParseError("exponent too large", start);
        }
        if (peek() == '.') throw ParseError("non-integer exponent", start);
        if (paren && !accept(')')) throw ParseError("non-integer exponent", start);
        return negative ? -n : n;
    }

    RationalExpr primary()
    {
        skip_space();
        const std::size_t start = pos_;
        if (at_end()) throw ParseError("unexpected end of input", pos_);
        const char c = peek();
        if (c == '(') {
            ++pos_;
            RationalExpr e = expression();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", start);
    }

    RationalExpr number()
    {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '.') throw ParseError("decimal literals are not supported; write a ratio such as 3/2", start);
        return RationalExpr(Rational(std::string(text_.substr(start, pos_ - start))));
    }

    RationalExpr identifier()
    {
        const std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
        const std::string_view id = text_.substr(start, pos_ - start);
        std::size_t primes = 0;
        while (peek() == '\'') {
            ++pos_;
            ++primes;
        }
        if (id == "u" && primes <= 2) return RationalExpr::variable(primes == 0 ? JetVar::U : primes == 1 ? JetVar::P : JetVar::Q);
        if (primes == 0) {
            if (id == "x") return kX;
            if (id == "p") return kP;
            if (id == "q") return kQ;
            skip_space();
            if (peek() == '(')
                throw ParseError("function '" + std::string(id) + "' is not supported; only rational expressions in x, u, u', u'' are accepted", start);
        }
        throw ParseError("unknown identifier '" + std::string(text_.substr(start, pos_ - start)) + "'", start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

RationalExpr parse(std::string_view text)
{
    return Parser(text).run();
}

}  // namespace jetlin
