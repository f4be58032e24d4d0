#include "jetreduce/algebra.hpp"
#include "jetreduce/calculus.hpp"
#include "jetreduce/fixture.hpp"
#include "jetreduce/parse.hpp"
#include "jetreduce/reducer.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

using namespace jetreduce;

namespace {

std::filesystem::path fixture_dir() { return JETREDUCE_FIXTURE_DIR; }

PDEProblem motivating() {
    return make_problem(parse_equation("diff(w(t,x),t,x) = diff(w(t,x),t)*diff(w(t,x),x)/w(t,x)"));
}

PDEProblem from_fixture(const std::string& name) { return fixture_problem(load_fixture(fixture_dir() / name)); }

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

bool same_up_to_factor(const Expr& a, const Expr& b, const SymbolTable& t) {
    Normalizer norm(t);
    RationalForm q = norm(a / b);
    for (const auto& s : symbols_of(norm.to_expr(q)))
        if (s.starts_with("I_")) return false;
    return !q.is_zero();
}

}  // namespace

TEST(IntegralSystem, Motivating) {
    auto p = motivating();
    auto rels = integral_system(p);
    ASSERT_EQ(rels.size(), 2u);
    EXPECT_EQ(rels[0], parse("I_t + I_W0_0*W[1,0] + I_W1_0*W[2,0] + I_W0_1*W[1,1]"));
    EXPECT_EQ(rels[1], parse("I_x + I_W0_0*W[0,1] + I_W1_0*W[1,1] + I_W0_1*W[0,2]"));
}

TEST(GradientNames, RoundTrip) {
    EXPECT_EQ(gradient_name("t"), "I_t");
    EXPECT_EQ(gradient_name("W[0,1]"), "I_W0_1");
    EXPECT_EQ(coordinate_of_gradient("I_W0_1"), "W[0,1]");
    EXPECT_EQ(coordinate_of_gradient("I_x1"), "x1");
    EXPECT_FALSE(coordinate_of_gradient("x"));
}

TEST(Candidates, Motivating) {
    auto c = candidate_subsets(motivating());
    EXPECT_EQ(c, (std::vector<CandidateSubset>{{{2, 0}, {1, 1}}, {{1, 1}, {0, 2}}}));
}

TEST(Candidates, RespectsCap) {
    auto p = from_fixture("eq2.fix");
    EXPECT_LE(candidate_subsets(p, 5).size(), 5u);
}

TEST(Eliminate, MotivatingRawEquation) {
    auto p = motivating();
    Normalizer norm(p.symbols);
    Elimination e = eliminate(p, {{1, 1}, {0, 2}}, norm);
    EXPECT_EQ(e.degree, 1);
    Expr expected = parse("I_t + I_W0_0*W[1,0] + I_W1_0*W[2,0] + W[1,0]*W[0,1]/W[0,0]*I_W0_1");
    EXPECT_TRUE(same_up_to_factor(e.raw, expected, p.symbols)) << format(e.raw);
}

TEST(Eliminate, BackSubstitutionSatisfiesSystem) {
    for (const char* name : {"motivating.fix", "eq1.fix", "eq3_i1.fix"}) {
        auto p = from_fixture(name);
        Normalizer norm(p.symbols);
        for (const auto& c : candidate_subsets(p)) {
            Elimination e;
            try {
                e = eliminate(p, c, norm);
            } catch (const SingularSystem&) {
                continue;
            }
            Bindings b;
            for (const auto& [n, v] : e.values) b.emplace_back(sym(n), v);
            for (const auto& r : integral_system(p))
                EXPECT_TRUE(norm.is_zero(substitute(r, b))) << name << " " << format_subset(c);
        }
    }
}

TEST(Reduce, MotivatingCascade) {
    auto p = motivating();
    auto rs = reduce(p, {{1, 1}, {0, 2}});
    ASSERT_EQ(rs.status, ReductionStatus::Reduced) << rs.reason;
    EXPECT_TRUE(contains(rs.independent_of, "W[1,0]"));
    EXPECT_FALSE(contains(rs.remaining, "W[1,0]"));
    ASSERT_EQ(rs.equations.size(), 1u);
    Expr expected = parse("I_W0_0 + W[0,1]/W[0,0]*I_W0_1");
    Normalizer norm(p.symbols);
    EXPECT_TRUE(norm.is_zero(rs.equations[0] - expected)) << format(rs.equations[0]);
}

TEST(Reduce, EquationsAreLinearHomogeneous) {
    for (const char* name : {"motivating.fix", "eq1.fix", "eq3_i1.fix", "eq3_i2.fix"}) {
        auto p = from_fixture(name);
        Normalizer norm(p.symbols);
        for (const auto& c : candidate_subsets(p)) {
            auto rs = reduce(p, c);
            if (rs.status != ReductionStatus::Reduced) continue;
            for (const auto& eq : rs.equations) {
                Bindings zero, twice;
                for (const auto& s : symbols_of(eq))
                    if (s.starts_with("I_")) {
                        zero.emplace_back(sym(s), Expr(0));
                        twice.emplace_back(sym(s), 2 * sym(s));
                    }
                EXPECT_TRUE(norm.is_zero(substitute(eq, zero))) << format(eq);
                EXPECT_TRUE(norm.is_zero(substitute(eq, twice) - 2 * eq)) << format(eq);
            }
        }
    }
}

TEST(Reduce, Eq1FirstCandidateRejected) {
    auto p = from_fixture("eq1.fix");
    auto rs = reduce(p, {{2, 0}, {1, 1}});
    EXPECT_EQ(rs.status, ReductionStatus::Rejected);
    EXPECT_FALSE(rs.reason.empty());
    auto ok = reduce(p, {{1, 1}, {0, 2}});
    EXPECT_EQ(ok.status, ReductionStatus::Reduced) << ok.reason;
}

TEST(Reduce, Eq3Candidates) {
    auto p = from_fixture("eq3_i1.fix");
    EXPECT_EQ(reduce(p, {{3, 0}, {1, 2}}).status, ReductionStatus::Reduced);
    EXPECT_EQ(reduce(p, {{1, 2}, {0, 3}}).status, ReductionStatus::Reduced);
    auto n = reduce(p, {{2, 1}, {1, 2}});
    EXPECT_EQ(n.status, ReductionStatus::Nonlinear) << n.reason;
    EXPECT_EQ(n.equations.size(), 1u);
}

TEST(Fixture, RoundTrip) {
    for (const auto& entry : std::filesystem::directory_iterator(fixture_dir())) {
        if (entry.path().extension() != ".fix") continue;
        Fixture f = load_fixture(entry.path());
        Fixture g = parse_fixture(write_fixture(f));
        EXPECT_EQ(g.pde, f.pde);
        EXPECT_EQ(g.unknown, f.unknown);
        EXPECT_EQ(g.params, f.params);
        EXPECT_EQ(g.subset, f.subset);
        EXPECT_EQ(g.invariants, f.invariants);
        EXPECT_NO_THROW(fixture_problem(f)) << entry.path();
    }
}

TEST(Fixture, Errors) {
    EXPECT_THROW(parse_fixture("unknown: w(t,x)\n"), FixtureError);
    EXPECT_THROW(parse_fixture("pde: w(t,x)\nfoo: 1\n"), FixtureError);
    try {
        parse_fixture("pde: diff(w(t,x),t,x)\nparam: s: s = 2\n");
        FAIL();
    } catch (const FixtureError& e) {
        EXPECT_EQ(e.line, 2u);
    }
    EXPECT_THROW(parse_subset("[1,1] [0,"), std::invalid_argument);
    EXPECT_EQ(write_subset(parse_subset("[1,1]  [0,2]")), "[1,1] [0,2]");
}

TEST(Problem, RejectsLowOrder) {
    EXPECT_THROW(make_problem(parse_equation("diff(w(t,x),t) = w(t,x)")), UnsupportedForm);
    EXPECT_THROW(make_problem(parse_equation("diff(w(t,x),t,x) = diff(w(t,x),x,t)")), UnsupportedForm);
}
