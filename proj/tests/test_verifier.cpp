#include "generators.hpp"

#include "jetreduce/deadline.hpp"
#include "jetreduce/fixture.hpp"
#include "jetreduce/parse.hpp"
#include "jetreduce/verifier.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <filesystem>

using namespace jetreduce;
using jetreduce::testing::ExprGen;

namespace {

struct Loaded {
    Fixture fixture;
    PDEProblem problem;
    std::vector<Expr> invariants;
};

Loaded load(const std::string& name) {
    Fixture f = load_fixture(std::filesystem::path(JETREDUCE_FIXTURE_DIR) / name);
    PDEProblem p = fixture_problem(f);
    auto inv = fixture_invariants(f, p);
    return {f, p, inv};
}

bool is_jet_dependent(const Expr& e) {
    for (const auto& s : symbols_of(e))
        if (parse_jet_name(s)) return true;
    return false;
}

}  // namespace

TEST(Annihilates, Examples) {
    Normalizer norm;
    VectorField dt{{"t", "x"}, {1, 0}};
    EXPECT_TRUE(annihilates(dt, sym("x"), norm));
    EXPECT_FALSE(annihilates(dt, sym("t"), norm));
    VectorField f{{"x", "W[0,0]", "W[0,1]"}, {0, 1, parse("W[0,1]/W[0,0]")}};
    EXPECT_TRUE(annihilates(f, parse("W[0,1]/W[0,0]"), norm));
}

class KnownIntegral : public ::testing::TestWithParam<const char*> {};

TEST_P(KnownIntegral, Verified) {
    auto start = std::chrono::steady_clock::now();
    auto l = load(GetParam());
    Verdict v = verify_claim(l.problem, l.invariants, l.fixture.subset);
    EXPECT_EQ(v.status, VerdictStatus::Verified) << v.reason;
    EXPECT_TRUE(v.independent);
    EXPECT_TRUE(v.jet_dependent);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 60.0);
}

INSTANTIATE_TEST_SUITE_P(All, KnownIntegral,
                         ::testing::Values("motivating.fix", "eq1.fix", "eq2.fix", "eq3_i1.fix", "eq3_i2.fix",
                                           "eq4_i1.fix", "eq4_i2.fix"));

TEST(Verify, TimeIsNotAnInvariant) {
    auto l = load("motivating.fix");
    Verdict v = verify_claim(l.problem, {sym("t")}, l.fixture.subset);
    EXPECT_EQ(v.status, VerdictStatus::Refuted);
    Verdict w = verify_claim(l.problem, {sym("x"), parse("W[0,1]/W[0,0] + t")}, l.fixture.subset);
    EXPECT_EQ(w.status, VerdictStatus::Refuted);
}

TEST(Verify, DependentInvariantsRefuted) {
    auto l = load("motivating.fix");
    Verdict v = verify_claim(l.problem, {parse("W[0,1]/W[0,0]"), parse("W[0,0]^2/W[0,1]^2")}, l.fixture.subset);
    EXPECT_EQ(v.status, VerdictStatus::Refuted);
    EXPECT_FALSE(v.independent);
}

TEST(Verify, RejectedCandidateIsInconclusive) {
    auto l = load("eq1.fix");
    Verdict v = verify_claim(l.problem, l.invariants, CandidateSubset{{2, 0}, {1, 1}});
    EXPECT_EQ(v.status, VerdictStatus::Inconclusive);
    EXPECT_FALSE(v.reason.empty());
}

TEST(ResidualCheck, Examples) {
    auto eq3 = load("eq3_i2.fix");
    auto r = residual_check(eq3.problem, parse("(W[0,0]*W[0,2] - a*t*W[0,0]^2 - W[0,1]^2)/W[0,0]^2"), 0);
    ASSERT_TRUE(r);
    EXPECT_TRUE(is_zero(*r, eq3.problem.symbols)) << format(*r);
    auto x = residual_check(eq3.problem, sym("x"), 0);
    ASSERT_TRUE(x);
    EXPECT_TRUE(x->is_zero_literal());

    auto m = load("motivating.fix");
    auto q = residual_check(m.problem, parse("W[0,1]/W[0,0]"), 0);
    ASSERT_TRUE(q);
    EXPECT_TRUE(is_zero(*q)) << format(*q);
    EXPECT_FALSE(residual_check(m.problem, parse("W[1,0]"), 0));
}

TEST(Verify, PipelineSelfConsistency) {
    for (const char* name : {"motivating.fix", "eq1.fix", "eq3_i1.fix"}) {
        auto l = load(name);
        for (const auto& c : candidate_subsets(l.problem)) {
            auto rs = reduce(l.problem, c);
            if (rs.status != ReductionStatus::Reduced) continue;
            auto r = solve_system(rs, l.problem);
            if (!r.integral) continue;
            Verdict v = verify(l.problem, *r.integral);
            EXPECT_EQ(v.status, VerdictStatus::Verified) << name << " " << format_subset(c) << ": " << v.reason;
        }
    }
}

TEST(Verify, PerturbationSensitivity) {
    const char* names[] = {"motivating.fix", "eq1.fix", "eq2.fix", "eq3_i1.fix", "eq3_i2.fix"};
    std::vector<Loaded> fixtures;
    std::vector<std::vector<VectorField>> fields;
    Normalizer norm;
    for (const char* n : names) {
        fixtures.push_back(load(n));
        const auto& l = fixtures.back();
        Verdict base = verify_claim(l.problem, l.invariants, l.fixture.subset);
        ASSERT_EQ(base.status, VerdictStatus::Verified) << n;
        fields.push_back(fields_of(reduce(l.problem, base.candidate), norm));
    }
    int flipped = 0;
    const int trials = 100;
    for (int i = 0; i < trials; ++i) {
        std::size_t f = static_cast<std::size_t>(i) % fixtures.size();
        auto& l = fixtures[f];
        ExprGen gen(1000 + static_cast<unsigned>(i), coordinates(l.problem));
        auto invariant = [&](const Expr& e) {
            return std::all_of(fields[f].begin(), fields[f].end(),
                               [&](const VectorField& v) { return annihilates(v, e, norm); });
        };
        Expr term;
        do term = gen.poly(2);
        while (symbols_of(term).empty() || invariant(term));
        auto inv = l.invariants;
        std::size_t k = 0;
        while (!is_jet_dependent(inv[k])) ++k;
        inv[k] = inv[k] + term;
        Verdict v = verify_claim(l.problem, inv, l.fixture.subset);
        if (v.status == VerdictStatus::Refuted) ++flipped;
        else ADD_FAILURE() << "trial " << i << " " << to_string(v.status) << ": " << format(inv[k]);
    }
    EXPECT_GE(flipped, 95);
}
