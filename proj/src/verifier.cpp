#include "jetreduce/verifier.hpp"

#include "jetreduce/algebra.hpp"
#include "jetreduce/calculus.hpp"
#include "jetreduce/deadline.hpp"

#include <algorithm>
#include <set>

namespace jetreduce {

bool annihilates(const VectorField& f, const Expr& phi, Normalizer& norm) {
    return norm.is_zero(apply_field(f, phi));
}

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Verified: return "verified";
        case VerdictStatus::Refuted: return "refuted";
        case VerdictStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

/// A nonzero normal form is a proof of nonzeroness only when it is free of
/// transcendental kernels (radicals carry their relation).
bool provably_nonzero(const RationalForm& r, const Normalizer& norm) {
    auto& atoms = AtomTable::instance();
    for (VarId v : r.num.variables()) {
        if (norm.is_radical(v)) continue;
        if (atoms.atom(v).kind() == Kind::Func) return false;
    }
    return true;
}

bool is_jet_dependent(const Expr& e) {
    for (const auto& s : symbols_of(e))
        if (parse_jet_name(s)) return true;
    return false;
}

}  // namespace

std::optional<Expr> residual_check(const PDEProblem& p, const Expr& phi, std::size_t direction) {
    Normalizer norm(p.symbols);
    Expr d = p.space.total_derivative(phi, direction);
    std::vector<MultiIndex> raised;
    for (const auto& s : symbols_of(d)) {
        auto k = parse_jet_name(s);
        if (!k || order(*k) != p.order() || (*k)[direction] == 0) continue;
        MultiIndex down = *k;
        --down[direction];
        if (phi.depends_on(jet_name(down))) raised.push_back(*k);
    }
    if (raised.empty()) return norm.simplify(d);
    for (const auto& k : raised) {
        std::string j = jet_name(k);
        if (!p.lhs.depends_on(j)) continue;
        PolyCoeffs pc;
        try {
            pc = poly_coeffs(p.lhs, j, norm);
        } catch (const UnsupportedForm&) {
            continue;
        }
        if (pc.coeffs.size() != 2 || norm.is_zero(pc.coeffs[1])) continue;
        Expr value = -pc.coeffs[0] / pc.coeffs[1];
        return norm.simplify(substitute(d, Bindings{{sym(j), value}}));
    }
    return std::nullopt;
}

Verdict verify(const PDEProblem& p, const FirstIntegral& fi) {
    Verdict v;
    v.candidate = fi.candidate;
    Normalizer norm(p.symbols);
    ReducedSystem rs = reduce(p, fi.candidate);
    v.assumptions = rs.assumptions;
    if (rs.status != ReductionStatus::Reduced) {
        v.reason = "candidate " + format_subset(fi.candidate) + " does not reduce: " + rs.reason;
        return v;
    }
    std::vector<VectorField> fields;
    try {
        fields = fields_of(rs, norm);
    } catch (const UnsupportedForm& e) {
        v.reason = e.what();
        return v;
    }

    std::set<std::string> allowed(rs.remaining.begin(), rs.remaining.end());
    for (const auto& s : p.symbols.symbols())
        if (s.kind == SymbolKind::Parameter) allowed.insert(s.name);
    bool refuted = false, inconclusive = false;
    std::vector<Expr> exprs;
    for (std::size_t i = 0; i < fi.invariants.size(); ++i) {
        const Expr& phi = fi.invariants[i].expr;
        exprs.push_back(phi);
        for (const auto& s : symbols_of(phi))
            if (!allowed.count(s)) {
                refuted = true;
                if (v.reason.empty()) v.reason = "invariant " + format(phi) + " depends on " + s;
            }
        for (std::size_t f = 0; f < fields.size(); ++f) {
            check_deadline();
            AnnihilationCheck c{f, i, CheckOutcome::Pass, {}};
            try {
                RationalForm r = norm(apply_field(fields[f], phi));
                if (!r.is_zero()) {
                    c.residual = format(norm.to_expr(r));
                    c.outcome = provably_nonzero(r, norm) ? CheckOutcome::Fail : CheckOutcome::Inconclusive;
                }
            } catch (const UnsupportedForm& e) {
                c.outcome = CheckOutcome::Inconclusive;
                c.residual = e.what();
            }
            if (c.outcome == CheckOutcome::Fail) {
                refuted = true;
                if (v.reason.empty()) v.reason = "field " + std::to_string(f) + " does not annihilate " + format(phi);
            }
            inconclusive = inconclusive || c.outcome == CheckOutcome::Inconclusive;
            v.annihilation.push_back(std::move(c));
        }
        for (std::size_t d = 0; d < p.dim(); ++d) {
            ResidualCheck rc{i, p.space.variables()[d], std::nullopt};
            try {
                if (auto r = residual_check(p, phi, d)) rc.zero = norm.is_zero(*r);
            } catch (const UnsupportedForm&) {
            }
            v.residuals.push_back(std::move(rc));
        }
    }
    v.independent = !exprs.empty() && functionally_independent(exprs, coordinates(p), norm);
    v.jet_dependent = std::any_of(exprs.begin(), exprs.end(), is_jet_dependent);
    if (!v.independent && v.reason.empty()) v.reason = "invariants are functionally dependent";
    if (!v.jet_dependent && v.reason.empty()) v.reason = "no jet-dependent invariant";
    if (refuted || !v.independent || !v.jet_dependent)
        v.status = VerdictStatus::Refuted;
    else if (inconclusive)
        v.status = VerdictStatus::Inconclusive;
    else
        v.status = VerdictStatus::Verified;
    if (v.status == VerdictStatus::Inconclusive && v.reason.empty()) v.reason = "zero test outside the supported class";
    return v;
}

Verdict verify_claim(const PDEProblem& p, const std::vector<Expr>& invariants,
                     const std::optional<CandidateSubset>& subset) {
    FirstIntegral fi;
    for (const auto& e : invariants) fi.invariants.push_back({e, "claimed"});
    if (subset) {
        fi.candidate = *subset;
        return verify(p, fi);
    }
    std::optional<Verdict> refuted, other;
    for (const auto& c : candidate_subsets(p)) {
        fi.candidate = c;
        Verdict v = verify(p, fi);
        if (v.status == VerdictStatus::Verified) return v;
        if (v.status == VerdictStatus::Refuted && !refuted && !v.annihilation.empty()) refuted = std::move(v);
        else if (!other) other = std::move(v);
    }
    if (refuted) return *refuted;
    if (other) return *other;
    Verdict v;
    v.reason = "no candidate subsets";
    return v;
}

}  // namespace jetreduce
