#pragma once

#include "jetreduce/fixture.hpp"
#include "jetreduce/pipeline.hpp"

#include <json.hpp>

#include <string>

namespace jetreduce {

struct ReportOptions {
    /// Report millis as 0 so reruns are byte-identical.
    bool timing = true;
};

/// "verified", "refuted", "inconclusive", "rejected", "nonlinear",
/// "unsolved" or "timeout".
std::string candidate_verdict(const CandidateRecord& c);

/// "F1[x, diff(w(t,x),x)/w(t,x)]".
std::string format_first_integral(const PDEProblem& p, const std::vector<Expr>& invariants);

nlohmann::ordered_json report_json(const Fixture& input, const PDEProblem& p, const PipelineResult& r,
                                   const ReportOptions& opts = {});
std::string report_text(const Fixture& input, const PDEProblem& p, const PipelineResult& r,
                        const ReportOptions& opts = {});

nlohmann::ordered_json verdict_json(const Fixture& input, const PDEProblem& p, const Verdict& v);
std::string verdict_text(const Fixture& input, const PDEProblem& p, const Verdict& v);

/// Input echo with an "error" status, for failures before the pipeline runs.
nlohmann::ordered_json error_json(const Fixture& input, const std::string& message);

}  // namespace jetreduce
