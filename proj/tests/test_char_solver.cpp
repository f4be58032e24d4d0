#include "jetreduce/calculus.hpp"
#include "jetreduce/char_solver.hpp"
#include "jetreduce/fixture.hpp"
#include "jetreduce/parse.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace jetreduce;

namespace {

PDEProblem from_fixture(const std::string& name) {
    return fixture_problem(load_fixture(std::filesystem::path(JETREDUCE_FIXTURE_DIR) / name));
}

std::vector<std::string> names(std::initializer_list<const char*> l) { return {l.begin(), l.end()}; }

bool along(const Expr& phi, const Expr& rhs, Normalizer& norm) {
    return norm.is_zero(diff(phi, "x") + rhs * diff(phi, "y"));
}

bool has_arctan(const Expr& e) {
    if (e.kind() == Kind::Func && e.fn() == Fn::Arctan) return true;
    for (const auto& o : e.ops())
        if (has_arctan(o)) return true;
    return false;
}

FirstIntegral solve(const PDEProblem& p, const CandidateSubset& c) {
    auto rs = reduce(p, c);
    EXPECT_EQ(rs.status, ReductionStatus::Reduced) << rs.reason;
    auto r = solve_system(rs, p);
    EXPECT_TRUE(r.integral) << r.failure;
    return r.integral.value_or(FirstIntegral{});
}

void expect_annihilated(const PDEProblem& p, const CandidateSubset& c, const FirstIntegral& fi) {
    Normalizer norm(p.symbols);
    auto rs = reduce(p, c);
    for (const auto& f : fields_of(rs, norm))
        for (const auto& i : fi.invariants) EXPECT_TRUE(norm.is_zero(apply_field(f, i.expr))) << format(i.expr);
}

}  // namespace

TEST(FieldOf, Examples) {
    Normalizer norm;
    auto f = field_of(parse("I_t"), names({"t", "x"}), norm);
    EXPECT_EQ(f.coefficients, (std::vector<Expr>{Expr(1), Expr(0)}));
    auto g = field_of(parse("I_W0_0 + W[0,1]/W[0,0]*I_W0_1"), names({"x", "W[0,0]", "W[0,1]"}), norm);
    EXPECT_EQ(g.coefficients[0], Expr(0));
    EXPECT_EQ(g.coefficients[1], Expr(1));
    EXPECT_TRUE(norm.is_zero(g.coefficients[2] - parse("W[0,1]/W[0,0]")));
    EXPECT_EQ(g.nonzero_count(), 2u);
}

TEST(FieldOf, Errors) {
    Normalizer norm;
    EXPECT_THROW(field_of(parse("I_t*I_x"), names({"t", "x"}), norm), UnsupportedForm);
    EXPECT_THROW(field_of(parse("I_t + 1"), names({"t", "x"}), norm), UnsupportedForm);
    EXPECT_THROW(field_of(parse("I_y"), names({"t", "x"}), norm), UnsupportedForm);
}

TEST(InvariantsOf, ZeroCoefficientCoordinates) {
    Normalizer norm;
    VectorField f{names({"t", "x", "W[0,0]", "W[1,0]", "W[0,1]"}), {1, 0, 0, 0, 0}};
    auto inv = invariants_of(f, norm);
    std::vector<Expr> got;
    for (const auto& i : inv) got.push_back(i.expr);
    EXPECT_EQ(got, (std::vector<Expr>{sym("x"), sym("W[0,0]"), sym("W[1,0]"), sym("W[0,1]")}));
}

TEST(InvariantsOf, MotivatingField) {
    Normalizer norm;
    VectorField f{names({"x", "W[0,0]", "W[0,1]"}), {0, 1, parse("W[0,1]/W[0,0]")}};
    auto inv = invariants_of(f, norm);
    ASSERT_EQ(inv.size(), 2u);
    EXPECT_EQ(inv[0].expr, sym("x"));
    EXPECT_TRUE(norm.is_zero(inv[1].expr - parse("W[0,1]/W[0,0]"))) << format(inv[1].expr);
}

TEST(InvariantsOf, Eq1FirstField) {
    Normalizer norm;
    VectorField f{names({"W[0,0]", "W[0,1]"}), {1, parse("(2*a*W[0,1] + c)/(2*a*W[0,0])")}};
    auto inv = invariants_of(f, norm);
    ASSERT_EQ(inv.size(), 1u);
    EXPECT_TRUE(norm.is_zero(apply_field(f, inv[0].expr)));
    Expr expected = parse("(2*a*W[0,1] + c)/W[0,0]");
    EXPECT_FALSE(functionally_independent({inv[0].expr, expected}, f.coordinates, norm)) << format(inv[0].expr);
}

TEST(InvariantsOf, CoupledCharacteristics) {
    Normalizer norm;
    // dU/dx = V, dV/dx = a.
    VectorField f{names({"x", "U", "V"}), {1, sym("V"), sym("a")}};
    auto inv = invariants_of(f, norm);
    ASSERT_EQ(inv.size(), 2u);
    for (const auto& i : inv) EXPECT_TRUE(norm.is_zero(apply_field(f, i.expr))) << format(i.expr);
    EXPECT_TRUE(functionally_independent({inv[0].expr, inv[1].expr}, f.coordinates, norm));
}

TEST(Ode, SeparableSoundness) {
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> d(-5, 5);
    Normalizer norm;
    int solved = 0;
    for (int i = 0; i < 40; ++i) {
        Expr f = (d(rng) * sym("x") + d(rng)) / (sym("x") - (d(rng) + 7));
        Expr g = i % 2 ? (sym("y") - d(rng)) * (sym("y") - (d(rng) + 11)) : pow(sym("y") + d(rng), 2) + (i % 5 + 1);
        Expr rhs = f * g;
        auto s = ode_separable(rhs, "x", "y", norm);
        if (!s) continue;
        ++solved;
        EXPECT_TRUE(along(s->invariant, rhs, norm)) << format(rhs) << " -> " << format(s->invariant);
    }
    EXPECT_GE(solved, 30);
}

TEST(Ode, LinearSoundness) {
    std::mt19937 rng(202);
    std::uniform_int_distribution<int> d(-4, 4);
    Normalizer norm;
    int solved = 0;
    for (int i = 0; i < 40; ++i) {
        Expr p = Expr(d(rng)) / (sym("x") - d(rng));
        Expr q = d(rng) * pow(sym("x"), 2) + d(rng) * sym("x") + d(rng) + 1;
        Expr rhs = p * sym("y") + q;
        auto s = ode_linear(rhs, "x", "y", norm);
        if (!s) continue;
        ++solved;
        EXPECT_TRUE(along(s->invariant, rhs, norm)) << format(rhs) << " -> " << format(s->invariant);
    }
    EXPECT_GE(solved, 30);
}

TEST(Ode, HomogeneousSoundness) {
    std::mt19937 rng(303);
    std::uniform_int_distribution<int> d(-3, 3);
    Normalizer norm;
    int solved = 0;
    for (int i = 0; i < 40; ++i) {
        Expr rhs = (d(rng) * sym("x") + d(rng) * sym("y")) / ((d(rng) + 5) * sym("x") + (d(rng) + 4) * sym("y"));
        auto s = ode_homogeneous(rhs, "x", "y", norm);
        if (!s) continue;
        ++solved;
        EXPECT_TRUE(along(s->invariant, rhs, norm)) << format(rhs) << " -> " << format(s->invariant);
    }
    EXPECT_GE(solved, 5);
}

TEST(Ode, AutonomousSoundness) {
    std::mt19937 rng(404);
    std::uniform_int_distribution<int> d(-5, 5);
    Normalizer norm;
    int solved = 0;
    for (int i = 0; i < 40; ++i) {
        Expr rhs = (sym("y") - d(rng)) * (sym("y") - d(rng) - 11) / (sym("y") + 20);
        auto s = ode_autonomous(rhs, "x", "y", norm);
        if (!s) continue;
        ++solved;
        EXPECT_TRUE(along(s->invariant, rhs, norm)) << format(rhs) << " -> " << format(s->invariant);
    }
    EXPECT_GE(solved, 30);
}

TEST(Ode, OutsideClasses) {
    Normalizer norm;
    EXPECT_FALSE(ode_separable(parse("x + y"), "x", "y", norm));
    EXPECT_FALSE(ode_linear(parse("y^2 + x"), "x", "y", norm));
    EXPECT_FALSE(ode_homogeneous(parse("x + y^2"), "x", "y", norm));
    EXPECT_FALSE(ode_autonomous(parse("x*y"), "x", "y", norm));
    EXPECT_FALSE(solve_ode(parse("x + y"), "x", "y", norm));
    auto s = solve_ode(parse("y/x + x"), "x", "y", norm);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->method, "H2 linear");
}

TEST(FunctionallyIndependent, Examples) {
    Normalizer norm;
    auto coords = names({"t", "x", "W[0,0]", "W[0,1]"});
    EXPECT_TRUE(functionally_independent({sym("x"), parse("W[0,1]/W[0,0]")}, coords, norm));
    EXPECT_FALSE(functionally_independent({sym("x"), parse("x^2")}, coords, norm));
    EXPECT_TRUE(functionally_independent({sym("t"), sym("x")}, coords, norm));
    EXPECT_FALSE(
        functionally_independent({parse("W[0,1]/W[0,0]"), parse("W[0,0]^2/W[0,1]^2 + 3")}, coords, norm));
}

TEST(SolveSystem, Motivating) {
    auto p = from_fixture("motivating.fix");
    auto fi = solve(p, {{1, 1}, {0, 2}});
    ASSERT_EQ(fi.invariants.size(), 2u);
    Normalizer norm(p.symbols);
    EXPECT_EQ(fi.invariants[0].expr, sym("x"));
    EXPECT_TRUE(norm.is_zero(fi.invariants[1].expr - parse("W[0,1]/W[0,0]")));
    expect_annihilated(p, {{1, 1}, {0, 2}}, fi);
}

TEST(SolveSystem, Eq1Arctan) {
    auto p = from_fixture("eq1.fix");
    auto fi = solve(p, {{1, 1}, {0, 2}});
    ASSERT_EQ(fi.invariants.size(), 2u);
    EXPECT_EQ(fi.invariants[0].expr, sym("x"));
    EXPECT_TRUE(has_arctan(fi.invariants[1].expr)) << format(fi.invariants[1].expr);
    expect_annihilated(p, {{1, 1}, {0, 2}}, fi);
}

TEST(SolveSystem, Eq2Arctan) {
    auto p = from_fixture("eq2.fix");
    auto c = candidate_subsets(p).front();
    auto fi = solve(p, c);
    ASSERT_FALSE(fi.invariants.empty());
    EXPECT_TRUE(has_arctan(fi.invariants.back().expr));
    expect_annihilated(p, c, fi);
}

TEST(SolveSystem, Eq3BothSubsets) {
    auto p = from_fixture("eq3_i1.fix");
    for (CandidateSubset c : {CandidateSubset{{3, 0}, {1, 2}}, CandidateSubset{{1, 2}, {0, 3}}}) {
        auto fi = solve(p, c);
        EXPECT_GE(fi.invariants.size(), 2u);
        expect_annihilated(p, c, fi);
    }
    auto fi = solve(p, {{1, 2}, {0, 3}});
    Normalizer norm(p.symbols);
    std::vector<Expr> got;
    for (const auto& i : fi.invariants) got.push_back(i.expr);
    ASSERT_EQ(got.size(), 2u);
    for (const char* ref : {"x", "(W[0,0]*W[0,2] - a*t*W[0,0]^2 - W[0,1]^2)/W[0,0]^2"}) {
        auto with_ref = got;
        with_ref.push_back(parse(ref));
        EXPECT_FALSE(functionally_independent(with_ref, coordinates(p), norm)) << ref;
    }
}

TEST(SolveSystem, NoJetInvariant) {
    auto p = from_fixture("motivating.fix");
    ReducedSystem rs;
    rs.status = ReductionStatus::Reduced;
    rs.equations = {sym("I_t")};
    rs.remaining = names({"t", "x"});
    auto r = solve_system(rs, p);
    EXPECT_FALSE(r.integral);
    EXPECT_NE(r.failure.find("jet"), std::string::npos);
}

TEST(SolveSystem, Deterministic) {
    auto p = from_fixture("eq3_i1.fix");
    auto a = solve(p, {{3, 0}, {1, 2}});
    auto b = solve(p, {{3, 0}, {1, 2}});
    ASSERT_EQ(a.invariants.size(), b.invariants.size());
    for (std::size_t i = 0; i < a.invariants.size(); ++i) EXPECT_EQ(a.invariants[i].expr, b.invariants[i].expr);
}
