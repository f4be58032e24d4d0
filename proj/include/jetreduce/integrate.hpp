#pragma once

#include "jetreduce/rational_form.hpp"

#include <string>

namespace jetreduce {

/// Antiderivative of a rational function of v whose denominator splits into
/// linear and quadratic factors over the coefficient field. Uses ln and
/// arctan. Throws UnsupportedForm when v occurs inside a kernel or the
/// denominator cannot be split.
Expr integrate_rational_univariate(const Expr& e, const std::string& v, Normalizer& norm);
Expr integrate_rational_univariate(const Expr& e, const std::string& v, const SymbolTable& table = {});

}  // namespace jetreduce
