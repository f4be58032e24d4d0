#include "jetreduce/pipeline.hpp"

#include "jetreduce/deadline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace jetreduce {

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::FirstIntegralsFound: return "first-integrals-found";
        case RunStatus::ReducedOnly: return "reduced-only";
        case RunStatus::NotReducible: return "not-reducible";
        case RunStatus::Error: return "error";
    }
    return "?";
}

std::vector<const CandidateRecord*> PipelineResult::verified() const {
    std::vector<const CandidateRecord*> out;
    for (const auto& c : candidates)
        if (c.verified()) out.push_back(&c);
    return out;
}

CandidateRecord run_candidate(const PDEProblem& p, const CandidateSubset& c) {
    CandidateRecord r;
    r.subset = c;
    r.reduced.candidate = c;
    auto start = std::chrono::steady_clock::now();
    try {
        r.reduced = reduce(p, c);
        if (r.reduced.status == ReductionStatus::Reduced) {
            SolveResult s = solve_system(r.reduced, p);
            if (s.integral) {
                r.verdict = verify(p, *s.integral);
                r.integral = std::move(s.integral);
                if (!r.verified()) r.failure = "verifier: " + r.verdict->reason;
            } else {
                r.failure = s.failure;
            }
        } else {
            r.failure = r.reduced.reason;
        }
    } catch (const Timeout&) {
        r.timed_out = true;
        r.failure = "timed out";
    }
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

PipelineResult run_pipeline(const PDEProblem& p, const PipelineOptions& opts) {
    PipelineResult result;
    auto subsets = candidate_subsets(p, opts.max_candidates);
    result.candidates.resize(subsets.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < subsets.size(); i = next++) {
            DeadlineScope scope(opts.timeout_per_candidate);
            result.candidates[i] = run_candidate(p, subsets[i]);
        }
    };
    unsigned jobs = std::clamp<unsigned>(opts.jobs, 1, static_cast<unsigned>(std::max<std::size_t>(subsets.size(), 1)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    bool reduced = std::any_of(result.candidates.begin(), result.candidates.end(),
                               [](const CandidateRecord& c) { return c.reduced.status == ReductionStatus::Reduced; });
    if (!result.verified().empty())
        result.status = RunStatus::FirstIntegralsFound;
    else if (reduced)
        result.status = RunStatus::ReducedOnly;
    else
        result.status = RunStatus::NotReducible;
    return result;
}

}  // namespace jetreduce
