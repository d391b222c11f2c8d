#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetlin {

/// Raised by the expression parser. `position` is the 0-based offset into
/// the input where the problem was detected.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at column " + std::to_string(position + 1)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class DivisionByZero : public std::domain_error {
public:
    DivisionByZero() : std::domain_error("division by the zero expression") {}
};

class SingularPoint : public std::domain_error {
public:
    SingularPoint() : std::domain_error("denominator vanishes at the evaluation point") {}
};

/// The Jacobian phi_x psi_u - phi_u psi_x or the total derivative of phi
/// vanishes identically, or phi/psi depend on p or q.
class DegenerateTransform : public std::invalid_argument {
public:
    explicit DegenerateTransform(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace jetlin
