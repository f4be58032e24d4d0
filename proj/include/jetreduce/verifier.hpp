#pragma once

#include "jetreduce/char_solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetreduce {

/// is_zero(Σ a_j ∂φ/∂z_j). UnsupportedForm propagates.
bool annihilates(const VectorField& f, const Expr& phi, Normalizer& norm);

enum class VerdictStatus { Verified, Refuted, Inconclusive };
std::string to_string(VerdictStatus s);

enum class CheckOutcome { Pass, Fail, Inconclusive };

struct AnnihilationCheck {
    std::size_t field = 0;
    std::size_t invariant = 0;
    CheckOutcome outcome = CheckOutcome::Pass;
    /// Normalized Σ a_j ∂φ/∂z_j when nonzero.
    std::string residual;
};

struct ResidualCheck {
    std::size_t invariant = 0;
    std::string direction;
    /// nullopt when F cannot be solved for a jet raised by the derivative.
    std::optional<bool> zero;
};

struct Verdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    std::string reason;
    CandidateSubset candidate;
    std::vector<AnnihilationCheck> annihilation;
    std::vector<ResidualCheck> residuals;
    bool independent = false;
    bool jet_dependent = false;
    std::vector<Expr> assumptions;
};

/// D_i φ with an order-n jet raised by D_i eliminated through F = 0, or
/// nullopt when F is not linear in any such jet.
std::optional<Expr> residual_check(const PDEProblem& p, const Expr& phi, std::size_t direction);

/// Rebuilds fi.candidate's reduced system and checks every invariant
/// against every field, plus independence and jet dependence.
Verdict verify(const PDEProblem& p, const FirstIntegral& fi);

/// Verifies claimed invariants (jet coordinates) against `subset`, or
/// against each candidate subset in turn when none is given; the first
/// verified candidate wins, otherwise the first verdict is returned.
Verdict verify_claim(const PDEProblem& p, const std::vector<Expr>& invariants,
                     const std::optional<CandidateSubset>& subset = std::nullopt);

}  // namespace jetreduce
