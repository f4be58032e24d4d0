#pragma once

#include "jetreduce/expr.hpp"
#include "jetreduce/symbols.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace jetreduce {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

/// Parse an expression in the plain grammar:
///   integers, `p/q`, `+ - * / ^`, parentheses, kernels
///   `exp ln sqrt sin cos tan arctan`, `diff(f(args), v1, v2, ...)`,
///   unknown-function applications `w(t,x)` and indexed symbols `W[1,0]`.
/// Exponents must evaluate to integers.
Expr parse(std::string_view text, const SymbolTable& symtab = {});

/// Parse `lhs = rhs` (or a bare expression) and return lhs - rhs.
Expr parse_equation(std::string_view text, const SymbolTable& symtab = {});

}  // namespace jetreduce
