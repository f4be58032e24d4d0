#pragma once

#include "jetreduce/verifier.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace jetreduce {

struct PipelineOptions {
    std::size_t max_candidates = 64;
    /// Budget per candidate; nullopt for none.
    std::optional<std::chrono::steady_clock::duration> timeout_per_candidate = std::chrono::seconds(30);
    unsigned jobs = 1;
};

struct CandidateRecord {
    CandidateSubset subset;
    ReducedSystem reduced;
    std::optional<FirstIntegral> integral;
    std::optional<Verdict> verdict;
    /// Why no verified integral came out of a reduced candidate.
    std::string failure;
    bool timed_out = false;
    double millis = 0;

    bool verified() const { return verdict && verdict->status == VerdictStatus::Verified; }
};

enum class RunStatus { FirstIntegralsFound, ReducedOnly, NotReducible, Error };
std::string to_string(RunStatus s);

struct PipelineResult {
    RunStatus status = RunStatus::NotReducible;
    std::vector<CandidateRecord> candidates;

    std::vector<const CandidateRecord*> verified() const;
};

/// reduce, solve and verify every candidate subset. Records keep candidate
/// order regardless of `jobs`.
PipelineResult run_pipeline(const PDEProblem& p, const PipelineOptions& opts = {});

/// A single candidate, under the current thread's deadline.
CandidateRecord run_candidate(const PDEProblem& p, const CandidateSubset& c);

}  // namespace jetreduce
