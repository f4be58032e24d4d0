#include "generators.hpp"

#include "jetreduce/parse.hpp"
#include "jetreduce/rational_form.hpp"

#include <gtest/gtest.h>

using namespace jetreduce;
using jetreduce::testing::ExprGen;

namespace {

Poly P(const char* text) {
    Normalizer n;
    return n(parse(text)).num;
}

}  // namespace

TEST(Poly, DivideExact) {
    EXPECT_EQ(divide_exact(P("x^2 - y^2"), P("x - y")), P("x + y"));
    EXPECT_FALSE(try_divide(P("x^2 + y^2"), P("x - y")));
    EXPECT_THROW(divide_exact(P("x + 1"), P("x + 2")), NotDivisible);
}

TEST(Poly, GcdExamples) {
    EXPECT_EQ(gcd(P("x^2 - 1"), P("x^2 + 2*x + 1")), P("x + 1"));
    EXPECT_EQ(gcd(P("6*x*y"), P("4*x^2")), P("x"));
    EXPECT_EQ(gcd(P("x + y"), P("x - y")), Poly(Rational(1)));
    EXPECT_EQ(gcd(Poly(), P("2*x + 4")), P("x + 2"));
}

TEST(Poly, GcdContainsPlantedFactor) {
    ExprGen gen(5, {"a", "b", "c"});
    Normalizer n;
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        Poly a = n(gen.poly(2)).num, b = n(gen.poly(2)).num, g = n(gen.poly(2)).num;
        if (a.is_zero() || b.is_zero() || g.is_zero()) continue;
        Poly h = gcd(a * g, b * g);
        EXPECT_TRUE(try_divide(a * g, h));
        EXPECT_TRUE(try_divide(b * g, h));
        EXPECT_TRUE(try_divide(h, g)) << format(n.to_expr(g));
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(Poly, SqrtExact) {
    auto r = sqrt_exact(P("x^2 + 2*x*y + y^2"));
    ASSERT_TRUE(r);
    EXPECT_EQ(*r * *r, P("x^2 + 2*x*y + y^2"));
    EXPECT_FALSE(sqrt_exact(P("x^2 + y^2")));
    EXPECT_FALSE(sqrt_exact(P("-x^2")));
    EXPECT_EQ(sqrt_exact(P("9/4*a^2")), P("3/2*a"));
}

TEST(Poly, PseudoRemainder) {
    VarId x = AtomTable::instance().symbol_id("x");
    Poly r = prem(P("x^3 + a*x + 1"), P("b*x - 1"), x);
    EXPECT_EQ(r.degree(x), 0u);
    EXPECT_EQ(r, P("b^3 + a*b^2 + 1"));
}
