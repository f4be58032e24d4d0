#include "generators.hpp"

#include "jetreduce/jet.hpp"
#include "jetreduce/parse.hpp"
#include "jetreduce/rational_form.hpp"

#include <gtest/gtest.h>

using namespace jetreduce;
using jetreduce::testing::ExprGen;

namespace {

long binomial(long n, long k) {
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

JetSpace tx_space(int n) { return JetSpace("w", {"t", "x"}, {"t", "x"}, n); }

std::vector<std::string> jet_symbols(int n) {
    std::vector<std::string> out{"t", "x", "a"};
    for (const auto& k : tx_space(n).indices()) out.push_back(jet_name(k));
    return out;
}

}  // namespace

TEST(MultiIndices, Examples) {
    EXPECT_EQ(multi_indices(2, 2), (std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}}));
    EXPECT_EQ(multi_indices(1, 3), (std::vector<MultiIndex>{{3}}));
    EXPECT_EQ(multi_indices(3, 1), (std::vector<MultiIndex>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    EXPECT_EQ(multi_indices(2, 0), (std::vector<MultiIndex>{{0, 0}}));
}

TEST(MultiIndices, CountIsMultisetNumber) {
    for (std::size_t m = 1; m <= 4; ++m)
        for (int r = 0; r <= 5; ++r) {
            auto ks = multi_indices(m, r);
            EXPECT_EQ(static_cast<long>(ks.size()), binomial(static_cast<long>(m) + r - 1, r)) << m << "," << r;
            for (const auto& k : ks) EXPECT_EQ(order(k), r);
            EXPECT_TRUE(std::is_sorted(ks.rbegin(), ks.rend()));
        }
}

TEST(JetNames, RoundTrip) {
    EXPECT_EQ(jet_name({1, 0}), "W[1,0]");
    EXPECT_EQ(parse_jet_name("W[1,2,3]"), (MultiIndex{1, 2, 3}));
    EXPECT_FALSE(parse_jet_name("W"));
    EXPECT_FALSE(parse_jet_name("W[1,]"));
    EXPECT_FALSE(parse_jet_name("V[1]"));
}

TEST(ToJet, MotivatingEquation) {
    auto f = to_jet(parse_equation("diff(w(t,x),t,x) - diff(w(t,x),t)*diff(w(t,x),x)/w(t,x) = 0"));
    EXPECT_EQ(f.expr, parse("W[1,1] - W[1,0]*W[0,1]/W[0,0]"));
    EXPECT_EQ(f.space.max_order(), 2);
    EXPECT_EQ(f.space.variables(), (std::vector<std::string>{"t", "x"}));
}

TEST(ToJet, UnknownAlone) {
    auto f = to_jet(parse("w(t,x)"));
    EXPECT_EQ(f.expr, sym("W[0,0]"));
    EXPECT_EQ(f.space.max_order(), 0);
}

TEST(ToJet, ThirdOrder) {
    auto f = to_jet(parse("w(t,x)^2*diff(w(t,x),t,x,x) - 2*w(t,x)*diff(w(t,x),t,x)*diff(w(t,x),x)"
                          " + 2*diff(w(t,x),t)*diff(w(t,x),x)^2 - w(t,x)*diff(w(t,x),t)*diff(w(t,x),x,x)"
                          " - a*w(t,x)^3"));
    Expr expected = parse("W[0,0]^2*W[1,2] - 2*W[0,0]*W[1,1]*W[0,1] + 2*W[1,0]*W[0,1]^2 - W[0,0]*W[1,0]*W[0,2]"
                          " - a*W[0,0]^3");
    EXPECT_EQ(f.expr, expected);
    EXPECT_EQ(f.space.max_order(), 3);
}

TEST(ToJet, InactiveArgumentsDemoted) {
    auto f = to_jet(parse("diff(w(t,x,y),x,x) + y*w(t,x,y)"));
    EXPECT_EQ(f.space.variables(), std::vector<std::string>{"x"});
    EXPECT_EQ(f.space.inactive(), (std::vector<std::string>{"t", "y"}));
    EXPECT_EQ(f.expr, parse("W[2] + y*W[0]"));
    EXPECT_EQ(f.space.from_jet(f.expr), parse("diff(w(t,x,y),x,x) + y*w(t,x,y)"));
}

TEST(ToJet, Errors) {
    EXPECT_THROW(to_jet(parse("diff(u(t,x),t) + v(t,x)")), UnsupportedForm);
    EXPECT_THROW(to_jet(parse("w(t,x) + w(x,t)")), UnsupportedForm);
    EXPECT_THROW(to_jet(parse("x + t")), UnsupportedForm);
}

TEST(FromJet, Examples) {
    JetSpace s = tx_space(2);
    EXPECT_EQ(s.from_jet(sym("W[0,1]")), parse("diff(w(t,x),x)"));
    EXPECT_EQ(s.from_jet(sym("W[0,0]")), parse("w(t,x)"));
}

TEST(FromJet, RoundTripRandom) {
    JetSpace s = tx_space(2);
    ExprGen gen(17, jet_symbols(2));
    for (int i = 0; i < 50; ++i) {
        Expr e = gen.rational(2);
        EXPECT_EQ(s.to_jet(s.from_jet(e)), e) << format(e);
    }
}

TEST(TotalDerivative, Examples) {
    JetSpace s = tx_space(1);
    EXPECT_EQ(s.total_derivative(sym("x"), 0), Expr(0));
    EXPECT_EQ(s.total_derivative(sym("W[0,0]"), 0), sym("W[1,0]"));
    Expr d = s.total_derivative(parse("W[0,1]/W[0,0]"), 1);
    EXPECT_TRUE(is_zero(d - parse("W[0,2]/W[0,0] - W[0,1]^2/W[0,0]^2"))) << format(d);
}

TEST(TotalDerivative, CommutationOnRandomJets) {
    JetSpace s = tx_space(2);
    ExprGen gen(23, jet_symbols(2));
    for (int i = 0; i < 100; ++i) {
        Expr e = gen.rational(2);
        Expr dtx = s.total_derivative(s.total_derivative(e, 1), 0);
        Expr dxt = s.total_derivative(s.total_derivative(e, 0), 1);
        EXPECT_TRUE(is_zero(dtx - dxt)) << format(e);
    }
}

TEST(TotalDerivative, Leibniz) {
    JetSpace s = tx_space(2);
    ExprGen gen(29, jet_symbols(2));
    for (int i = 0; i < 30; ++i) {
        Expr e = gen.rational(2), f = gen.rational(2);
        for (std::size_t dir = 0; dir < 2; ++dir) {
            Expr lhs = s.total_derivative(e * f, dir);
            Expr rhs = s.total_derivative(e, dir) * f + e * s.total_derivative(f, dir);
            EXPECT_TRUE(is_zero(lhs - rhs));
        }
    }
}
