#include "jetreduce/report.hpp"

#include <cmath>
#include <sstream>

namespace jetreduce {

using nlohmann::ordered_json;

namespace {

ordered_json input_json(const Fixture& in) {
    ordered_json j;
    j["pde"] = in.pde;
    j["unknown"] = in.unknown;
    j["params"] = in.params;
    return j;
}

ordered_json subset_json(const CandidateSubset& c) {
    ordered_json j = ordered_json::array();
    for (const auto& k : c) j.push_back(k);
    return j;
}

std::vector<std::string> assumption_strings(const std::vector<Expr>& as) {
    std::vector<std::string> out;
    for (const auto& a : as) out.push_back(format(a) + " != 0");
    return out;
}

std::vector<std::string> derivative_strings(const PDEProblem& p, const std::vector<Expr>& es) {
    std::vector<std::string> out;
    for (const auto& e : es) out.push_back(format(p.space.from_jet(e)));
    return out;
}

std::vector<Expr> invariant_exprs(const FirstIntegral& fi) {
    std::vector<Expr> out;
    for (const auto& i : fi.invariants) out.push_back(i.expr);
    return out;
}

std::string candidate_reason(const CandidateRecord& c) {
    if (c.verified()) return {};
    return c.failure;
}

}  // namespace

std::string candidate_verdict(const CandidateRecord& c) {
    if (c.timed_out) return "timeout";
    if (c.verdict) return to_string(c.verdict->status);
    switch (c.reduced.status) {
        case ReductionStatus::Rejected: return "rejected";
        case ReductionStatus::Nonlinear: return "nonlinear";
        case ReductionStatus::Reduced: return "unsolved";
    }
    return "?";
}

std::string format_first_integral(const PDEProblem& p, const std::vector<Expr>& invariants) {
    std::string s = "F1[";
    auto parts = derivative_strings(p, invariants);
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    return s + "]";
}

ordered_json report_json(const Fixture& input, const PDEProblem& p, const PipelineResult& r,
                         const ReportOptions& opts) {
    ordered_json j;
    j["status"] = to_string(r.status);
    j["input"] = input_json(input);
    j["candidates"] = ordered_json::array();
    for (const auto& c : r.candidates) {
        ordered_json e;
        e["subset"] = subset_json(c.subset);
        std::vector<std::string> eqs;
        for (const auto& q : c.reduced.equations) eqs.push_back(format(q));
        e["equations"] = eqs;
        e["assumptions"] = assumption_strings(c.reduced.assumptions);
        std::vector<std::string> invs;
        if (c.verified()) invs = derivative_strings(p, invariant_exprs(*c.integral));
        e["invariants"] = invs;
        e["first_integral"] = c.verified() ? format_first_integral(p, invariant_exprs(*c.integral)) : "";
        e["verdict"] = candidate_verdict(c);
        e["reason"] = candidate_reason(c);
        e["millis"] = opts.timing ? std::round(c.millis * 1000) / 1000 : 0.0;
        j["candidates"].push_back(std::move(e));
    }
    return j;
}

std::string report_text(const Fixture& input, const PDEProblem& p, const PipelineResult& r,
                        const ReportOptions& opts) {
    std::ostringstream out;
    out << "pde: " << input.pde << "\n";
    out << "unknown: " << format(p.space.applied()) << ", order " << p.order() << "\n";
    for (const auto& c : r.candidates) {
        out << "candidate " << format_subset(c.subset) << ": " << candidate_verdict(c);
        if (opts.timing) out << " (" << static_cast<long>(std::lround(c.millis)) << " ms)";
        out << "\n";
        if (c.verified()) {
            out << "  " << format_first_integral(p, invariant_exprs(*c.integral)) << "\n";
            for (const auto& a : assumption_strings(c.reduced.assumptions)) out << "  assuming " << a << "\n";
        } else if (!c.failure.empty()) {
            out << "  " << c.failure << "\n";
        }
    }
    out << "status: " << to_string(r.status) << "\n";
    return out.str();
}

ordered_json verdict_json(const Fixture& input, const PDEProblem& p, const Verdict& v) {
    ordered_json j;
    j["status"] = to_string(v.status);
    j["input"] = input_json(input);
    std::vector<Expr> invs = fixture_invariants(input, p);
    ordered_json c;
    c["subset"] = subset_json(v.candidate);
    c["assumptions"] = assumption_strings(v.assumptions);
    c["invariants"] = derivative_strings(p, invs);
    c["verdict"] = to_string(v.status);
    c["reason"] = v.reason;
    c["independent"] = v.independent;
    c["jet_dependent"] = v.jet_dependent;
    ordered_json checks = ordered_json::array();
    for (const auto& a : v.annihilation) {
        ordered_json k;
        k["field"] = a.field;
        k["invariant"] = a.invariant;
        k["outcome"] = a.outcome == CheckOutcome::Pass ? "pass" : a.outcome == CheckOutcome::Fail ? "fail" : "inconclusive";
        if (!a.residual.empty()) k["residual"] = a.residual;
        checks.push_back(std::move(k));
    }
    c["annihilation"] = checks;
    ordered_json residuals = ordered_json::array();
    for (const auto& r : v.residuals) {
        ordered_json k;
        k["invariant"] = r.invariant;
        k["direction"] = r.direction;
        k["zero"] = r.zero ? ordered_json(*r.zero) : ordered_json(nullptr);
        residuals.push_back(std::move(k));
    }
    c["residuals"] = residuals;
    j["candidates"] = ordered_json::array({c});
    return j;
}

std::string verdict_text(const Fixture& input, const PDEProblem& p, const Verdict& v) {
    std::ostringstream out;
    out << "pde: " << input.pde << "\n";
    std::vector<Expr> invs = fixture_invariants(input, p);
    out << "claim: " << format_first_integral(p, invs) << "\n";
    out << "candidate " << format_subset(v.candidate) << "\n";
    std::size_t pass = 0;
    for (const auto& a : v.annihilation) pass += a.outcome == CheckOutcome::Pass;
    out << "annihilation checks: " << pass << "/" << v.annihilation.size() << " pass\n";
    out << "independent: " << (v.independent ? "yes" : "no") << ", jet-dependent: " << (v.jet_dependent ? "yes" : "no")
        << "\n";
    for (const auto& a : assumption_strings(v.assumptions)) out << "assuming " << a << "\n";
    out << "verdict: " << to_string(v.status);
    if (!v.reason.empty()) out << " (" << v.reason << ")";
    out << "\n";
    return out.str();
}

ordered_json error_json(const Fixture& input, const std::string& message) {
    ordered_json j;
    j["status"] = "error";
    j["input"] = input_json(input);
    j["error"] = message;
    j["candidates"] = ordered_json::array();
    return j;
}

}  // namespace jetreduce
