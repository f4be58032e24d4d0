#include "jetreduce/parse.hpp"
#include "jetreduce/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace jetreduce;

namespace {

Fixture input(const std::string& pde) {
    Fixture f;
    f.pde = pde;
    f.unknown = "w(t,x)";
    return f;
}

const char* kMotivating = "diff(w(t,x),t,x) - diff(w(t,x),t)*diff(w(t,x),x)/w(t,x) = 0";

}  // namespace

TEST(Report, SchemaKeys) {
    Fixture in = input(kMotivating);
    PDEProblem p = fixture_problem(in);
    auto j = report_json(in, p, run_pipeline(p));
    EXPECT_EQ(j["status"], "first-integrals-found");
    ASSERT_TRUE(j["candidates"].is_array());
    ASSERT_FALSE(j["candidates"].empty());
    for (const auto& c : j["candidates"]) {
        for (const char* key : {"subset", "equations", "assumptions", "invariants", "verdict", "millis"})
            EXPECT_TRUE(c.contains(key)) << key;
        EXPECT_TRUE(c["subset"].is_array());
        EXPECT_TRUE(c["subset"][0].is_array());
        EXPECT_TRUE(c["millis"].is_number());
    }
}

TEST(Report, MotivatingFirstIntegral) {
    Fixture in = input(kMotivating);
    PDEProblem p = fixture_problem(in);
    std::string text = report_text(in, p, run_pipeline(p));
    EXPECT_NE(text.find("F1[x, diff(w(t,x),x)/w(t,x)]"), std::string::npos) << text;
}

TEST(Report, DecoupledCase) {
    Fixture in = input("diff(w(t,x),t,x) = 0");
    PDEProblem p = fixture_problem(in);
    std::string text = report_text(in, p, run_pipeline(p));
    EXPECT_NE(text.find("F1[x, diff(w(t,x),x)]"), std::string::npos) << text;
    EXPECT_NE(text.find("F1[t, diff(w(t,x),t)]"), std::string::npos) << text;
}

TEST(Report, InvariantsRoundTripThroughDerivativeNotation) {
    Fixture in = input(kMotivating);
    PDEProblem p = fixture_problem(in);
    PipelineResult r = run_pipeline(p);
    auto j = report_json(in, p, r);
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        const auto& c = r.candidates[i];
        const auto& invs = j["candidates"][i]["invariants"];
        if (!c.verified()) {
            EXPECT_TRUE(invs.empty());
            continue;
        }
        ASSERT_EQ(invs.size(), c.integral->invariants.size());
        for (std::size_t k = 0; k < invs.size(); ++k)
            EXPECT_EQ(p.space.to_jet(parse(invs[k].get<std::string>())), c.integral->invariants[k].expr);
    }
}

TEST(Report, DeterministicWithoutTiming) {
    Fixture in = load_fixture(std::filesystem::path(JETREDUCE_FIXTURE_DIR) / "eq3_i2.fix");
    in.subset.reset();
    in.invariants.clear();
    PDEProblem p = fixture_problem(in);
    PipelineOptions serial, parallel;
    parallel.jobs = 3;
    auto a = report_json(in, p, run_pipeline(p, serial), {false}).dump();
    auto b = report_json(in, p, run_pipeline(p, serial), {false}).dump();
    auto c = report_json(in, p, run_pipeline(p, parallel), {false}).dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(Report, TimeoutIsPerCandidate) {
    Fixture in = input(kMotivating);
    PDEProblem p = fixture_problem(in);
    PipelineOptions opts;
    opts.timeout_per_candidate = std::chrono::nanoseconds(1);
    PipelineResult r = run_pipeline(p, opts);
    ASSERT_FALSE(r.candidates.empty());
    for (const auto& c : r.candidates) {
        EXPECT_TRUE(c.timed_out);
        EXPECT_EQ(candidate_verdict(c), "timeout");
    }
    EXPECT_NE(r.status, RunStatus::Error);
}

TEST(Report, VerdictJson) {
    Fixture f = load_fixture(std::filesystem::path(JETREDUCE_FIXTURE_DIR) / "motivating.fix");
    PDEProblem p = fixture_problem(f);
    Verdict v = verify_claim(p, fixture_invariants(f, p), f.subset);
    auto j = verdict_json(f, p, v);
    EXPECT_EQ(j["status"], "verified");
    EXPECT_EQ(j["candidates"][0]["invariants"][1], "diff(w(t,x),x)/w(t,x)");
    EXPECT_FALSE(j["candidates"][0]["annihilation"].empty());
}

TEST(Report, ErrorJson) {
    auto j = error_json(input("diff(w(t,x),t"), "expected ')' at position 13");
    EXPECT_EQ(j["status"], "error");
    EXPECT_TRUE(j["candidates"].empty());
}
