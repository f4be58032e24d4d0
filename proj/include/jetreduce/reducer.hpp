#pragma once

#include "jetreduce/jet.hpp"
#include "jetreduce/rational_form.hpp"
#include "jetreduce/symbols.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetreduce {

/// F = 0 in jet coordinates.
struct PDEProblem {
    Expr lhs;
    JetSpace space;
    /// Parameters, radical relations, coordinates and gradient symbols.
    SymbolTable symbols;

    int order() const { return space.max_order(); }
    std::size_t dim() const { return space.dim(); }
};

/// Builds the problem from `equation` (lhs - rhs, derivative notation).
/// `params` supplies declared parameters and radical relations; any other
/// free symbol that is not an argument of the unknown becomes a parameter.
PDEProblem make_problem(const Expr& equation, const SymbolTable& params = {});

/// Coordinates I may depend on: active variables, then jets of order < n.
std::vector<std::string> coordinates(const PDEProblem& p);

/// "I_t" for t, "I_W0_1" for W[0,1].
std::string gradient_name(const std::string& coordinate);
std::optional<std::string> coordinate_of_gradient(std::string_view name);
bool is_gradient_symbol(const Expr& atom);

/// D_i I = 0 for each direction, written with gradient symbols.
std::vector<Expr> integral_system(const PDEProblem& p);

using CandidateSubset = std::vector<MultiIndex>;

/// m-subsets of the order-n jets that meet the jets present in lhs, in
/// combination order of the descending multi-index list, at most `cap`.
std::vector<CandidateSubset> candidate_subsets(const PDEProblem& p, std::size_t cap = 64);

struct Elimination {
    /// Candidate jet name -> value in gradient symbols.
    std::vector<std::pair<std::string, Expr>> values;
    std::vector<Expr> assumptions;
    /// Numerator of lhs after substitution.
    Expr raw;
    /// Total degree of raw in the gradient symbols.
    int degree = 0;
};

/// Solves the integral system for the candidate jets and substitutes into
/// lhs. Throws SingularSystem when the candidate cannot be eliminated.
Elimination eliminate(const PDEProblem& p, const CandidateSubset& c, Normalizer& norm);

enum class ReductionStatus { Reduced, Nonlinear, Rejected };

struct ReducedSystem {
    CandidateSubset candidate;
    ReductionStatus status = ReductionStatus::Rejected;
    std::string reason;
    /// Linear homogeneous in gradient symbols (raw equation if Nonlinear).
    std::vector<Expr> equations;
    /// Coordinates with forced zero gradient.
    std::vector<std::string> independent_of;
    /// Coordinates I may still depend on.
    std::vector<std::string> remaining;
    std::vector<Expr> assumptions;
};

/// Cascade split of the raw equation on the leftover order-n jets and on
/// every coordinate whose gradient is forced to vanish.
ReducedSystem split(const Elimination& elim, const PDEProblem& p, const CandidateSubset& c, Normalizer& norm);

/// eliminate + split, with failures reported as Rejected.
ReducedSystem reduce(const PDEProblem& p, const CandidateSubset& c);

std::string format_subset(const CandidateSubset& c);

}  // namespace jetreduce
