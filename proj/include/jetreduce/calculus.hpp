#pragma once

#include "jetreduce/expr.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace jetreduce {

/// Partial derivative with respect to symbol `var`, all other symbols constant.
/// Throws UnsupportedForm for derivative kernels or applications depending on var.
Expr diff(const Expr& e, const std::string& var);

using Bindings = std::vector<std::pair<Expr, Expr>>;

/// Simultaneous substitution of structurally matching subterms. The
/// replacement trees are not themselves rewritten.
Expr substitute(const Expr& e, const Bindings& bindings);
Expr substitute(const Expr& e, const std::map<std::string, Expr>& symbols);

}  // namespace jetreduce
