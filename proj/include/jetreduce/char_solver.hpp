#pragma once

#include "jetreduce/reducer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetreduce {

/// Σ a_j ∂/∂z_j.
struct VectorField {
    std::vector<std::string> coordinates;
    std::vector<Expr> coefficients;

    std::size_t nonzero_count() const;
    std::string to_string() const;
};

struct Invariant {
    Expr expr;
    /// "coordinate", "H1 separable", "H2 linear", ...
    std::string provenance;
};

struct FirstIntegral {
    std::vector<Invariant> invariants;
    CandidateSubset candidate;
    std::vector<Expr> assumptions;
};

/// Coefficients of the gradient symbols of `coordinates` in `eq`.
/// Throws UnsupportedForm if eq is not linear homogeneous in them.
VectorField field_of(const Expr& eq, const std::vector<std::string>& coordinates, Normalizer& norm);

/// Σ a_j ∂φ/∂z_j, unsimplified.
Expr apply_field(const VectorField& f, const Expr& phi);

/// Solution of dy/dx = rhs as a function Φ(x, y) constant along solutions.
struct OdeSolution {
    Expr invariant;
    std::string method;
};

/// Single heuristics; each returns nullopt when the equation is outside its
/// class or the quadrature is not supported.
std::optional<OdeSolution> ode_separable(const Expr& rhs, const std::string& x, const std::string& y, Normalizer& norm);
std::optional<OdeSolution> ode_linear(const Expr& rhs, const std::string& x, const std::string& y, Normalizer& norm);
std::optional<OdeSolution> ode_homogeneous(const Expr& rhs, const std::string& x, const std::string& y,
                                           Normalizer& norm);
std::optional<OdeSolution> ode_autonomous(const Expr& rhs, const std::string& x, const std::string& y,
                                          Normalizer& norm);

/// H1..H4 in order, first success wins.
std::optional<OdeSolution> solve_ode(const Expr& rhs, const std::string& x, const std::string& y, Normalizer& norm);

/// Invariants of one field: zero-coefficient coordinates plus one
/// characteristic invariant per solvable coordinate pair.
std::vector<Invariant> invariants_of(const VectorField& f, Normalizer& norm);

/// Full-rank test of the gradient matrix over `coordinates`.
bool functionally_independent(const std::vector<Expr>& invariants, const std::vector<std::string>& coordinates,
                              Normalizer& norm);

struct SolveResult {
    std::optional<FirstIntegral> integral;
    /// Stage that stalled when integral is empty.
    std::string failure;
};

/// Sequential characteristics over the fields of a Reduced system.
SolveResult solve_system(const ReducedSystem& rs, const PDEProblem& p);

/// Fields of the reduced equations over rs.remaining.
std::vector<VectorField> fields_of(const ReducedSystem& rs, Normalizer& norm);

}  // namespace jetreduce
