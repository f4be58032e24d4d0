#pragma once

#include "jetreduce/rational_form.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetreduce {

struct PolyCoeffs {
    /// Coefficients of v^0 .. v^d.
    std::vector<Expr> coeffs;
    /// Factor the input was multiplied by before extraction (1 unless the
    /// denominator depends on v): sum coeffs[j] v^j == cleared * e.
    Expr cleared{1};
};

/// Coefficients of e as a polynomial in symbol v. Throws UnsupportedForm
/// when e is not polynomial in v after clearing denominators (v inside a kernel).
PolyCoeffs poly_coeffs(const Expr& e, const std::string& v, Normalizer& norm);
PolyCoeffs poly_coeffs(const Expr& e, const std::string& v, const SymbolTable& table = {});

class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LinearSolution {
    /// unknown name -> value, in the order the unknowns were given.
    std::vector<std::pair<std::string, Expr>> values;
    /// Pivots assumed nonzero during elimination (non-constant ones only).
    std::vector<Expr> assumptions;

    const Expr& at(const std::string& name) const;
};

/// Preferred pivot atoms: a pivot that is a monomial in atoms satisfying
/// the predicate is taken before any other candidate.
using PivotPreference = std::function<bool(const Expr& atom)>;

/// Symbolic Gauss-Jordan elimination over the field of rational expressions.
/// Each equation is `expr = 0` and must be linear in the unknowns.
LinearSolution linsolve(const std::vector<Expr>& eqs, const std::vector<std::string>& unknowns, Normalizer& norm,
                        const PivotPreference& prefer = {});
LinearSolution linsolve(const std::vector<Expr>& eqs, const std::vector<std::string>& unknowns,
                        const SymbolTable& table = {}, const PivotPreference& prefer = {});

}  // namespace jetreduce
