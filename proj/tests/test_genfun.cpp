#include <gtest/gtest.h>

#include "kit/testkit.hpp"
#include "microformal/errors.hpp"
#include "microformal/genfun.hpp"

using namespace microformal;
using mftest::expected;

namespace {

GenFun G(const std::string& text, int n1, int n2, Truncation t = {}) {
    return GenFun::from_series(n1, n2, t, parse_series(text, genfun_context(n1, n2), t.phase()));
}

Poly Y(const std::string& text, int n2 = 1) { return parse_poly(text, target_context(n2)); }

BiSeries X(const std::string& text, const Truncation& t, int n1 = 1) {
    return parse_series(text, source_context(n1), t.phase());
}

} // namespace

TEST(GenFun, InputAcquiresOneLambdaOnHigherPart) {
    GenFun s = G("x1^2 + x1*q1 + 1/2*q1^2", 1, 1);
    EXPECT_EQ(s.str(), "x1^2 + x1*q1 + l*1/2*q1^2");
    EXPECT_EQ(s.momentum_degree(), 2);
}

TEST(GenFun, Validation) {
    Truncation t{2, 2, 2, {}};
    EXPECT_THROW(G("q1^3", 1, 1, t), TruncationError);
    SeriesOptions o{false, true};
    EXPECT_THROW(parse_series("h^-1*x1*q1", genfun_context(1, 1), t.phase(), o), TruncationError);
    BiSeries wrong = parse_series("x1*q1", genfun_context(1, 1), t.amplitude());
    EXPECT_THROW(GenFun::from_series(1, 1, t, wrong), TruncationError);
    EXPECT_THROW(GenFun::from_series(1, 2, t, parse_series("x1*q1", genfun_context(1, 1), t.phase())), ContextError);
}

TEST(Decompose, DirectGrouping) {
    Decomposition d = decompose(G("x1^2 + x1*q1 + 1/2*q1^2", 1, 1));
    EXPECT_EQ(d.constant.str(), "x1^2");
    ASSERT_EQ(d.map.size(), 1U);
    EXPECT_EQ(d.map[0].str(), "x1");
    EXPECT_EQ(d.higher.str(), "l*1/2*q1^2");
}

TEST(Decompose, OrdinaryMap) {
    Decomposition d = decompose(G("x1^2*q1 - x1*q2", 1, 2));
    EXPECT_TRUE(d.constant.is_zero());
    EXPECT_EQ(d.map[0].str(), "x1^2");
    EXPECT_EQ(d.map[1].str(), "-x1");
    EXPECT_TRUE(d.higher.series().is_zero());
}

TEST(Decompose, HbarHigherPart) {
    Decomposition d = decompose(G("x1*q1 + 1/2*h*q1^2", 1, 1));
    EXPECT_TRUE(d.constant.is_zero());
    EXPECT_EQ(d.map[0].str(), "x1");
    EXPECT_EQ(d.higher.str(), "l*h*1/2*q1^2");
}

TEST(ClassicalLimit, DropsHbar) {
    EXPECT_EQ(classical_limit(G("x1*q1 + h*q1^2", 1, 1)).genfun().str(), "x1*q1");
    GenFun s = G("x1*q1 + x1*q1^2", 1, 1);
    EXPECT_EQ(classical_limit(s).genfun(), s);
    EXPECT_EQ(classical_limit(G("1 + h + h^2", 1, 1)).genfun().str(), "1");
}

TEST(ClassicalPullback, OrdinaryMapIsSubstitution) {
    Truncation t;
    BiSeries f = classical_pullback(classical_limit(G("x1^2*q1", 1, 1, t)), Y("y1 + 1"));
    EXPECT_EQ(f.str(), "x1^2 + 1");
}

TEST(ClassicalPullback, ZeroFunctionGivesConstantPart) {
    Truncation t;
    BiSeries f = classical_pullback(classical_limit(G("3*x1^2 + x1*q1 + x1*q1^2", 1, 1, t)), Y("0"));
    EXPECT_EQ(f.str(), "3*x1^2");
}

// y = x1/(1 - l), f = x1^2 / (2 (1 - l)).
TEST(ClassicalPullback, QuadraticClosedForm) {
    Truncation t{3, 3, 4, {}};
    BiSeries f = classical_pullback(classical_limit(G("x1*q1 + 1/2*q1^2", 1, 1, t)), Y("1/2*y1^2"));
    EXPECT_EQ(f.str(), expected("1/2*x1^2 + l*1/2*x1^2 + l^2*1/2*x1^2 + l^3*1/2*x1^2", f).str());
}

TEST(ClassicalPullback, StableUnderLargerTruncation) {
    Truncation small{3, 3, 4, {}}, large{6, 3, 4, {}};
    const std::string s = "x1*q1 - 2/3*x1*q1^2 + 1/5*q1^3 + x2*q2 + 1/2*q1*q2";
    Poly g = Y("1/2*y1^2 + y1*y2 - 1/3*y2^3", 2);
    BiSeries a = classical_pullback(classical_limit(G(s, 2, 2, small)), g);
    BiSeries b = classical_pullback(classical_limit(G(s, 2, 2, large)), g);
    EXPECT_EQ(a, b.reframe(a.grading()));
}

TEST(ClassicalPullback, ConstantShift) {
    Truncation t;
    ClassicalGenFun s = classical_limit(G("x1*q1 + 1/2*q1^2 - x1*q1^3", 1, 1, t));
    Poly g = Y("1/2*y1^2 + y1^3");
    BiSeries shifted = classical_pullback(s, g + Y("5/7"));
    EXPECT_EQ(shifted, classical_pullback(s, g) + X("5/7", t).reframe(shifted.grading()));
}

TEST(ClassicalPullback, RejectsHbar) {
    GenFun s = G("x1*q1 + h*q1^2", 1, 1);
    EXPECT_THROW(ClassicalGenFun{s}, ValidationError);
}

TEST(ClassicalPullback, ContextErrors) {
    ClassicalGenFun s = classical_limit(G("x1*q1 + x2*q2", 2, 2));
    EXPECT_THROW(classical_pullback(s, Y("y1")), ContextError);
    ContextPtr clash = Context::make(std::vector<std::string>{"y1", "y2", "x1"});
    EXPECT_THROW(classical_pullback(s, parse_poly("y1*x1", clash)), ContextError);
}

TEST(Gateaux, ConstantDirection) {
    Truncation t;
    ClassicalGenFun s = classical_limit(G("x1*q1 + 1/2*q1^2", 1, 1, t));
    BiSeries d = gateaux_derivative(s, Y("1/2*y1^2"), Y("1"));
    EXPECT_EQ(d, BiSeries::one(d.context(), d.grading()));
}

TEST(Gateaux, OrdinaryMapIsSubstitution) {
    Truncation t;
    ClassicalGenFun s = classical_limit(G("x1^2*q1 + x2*q2", 2, 2, t));
    BiSeries d = gateaux_derivative(s, Y("y1^3 + y2", 2), Y("y1*y2 + 2", 2));
    EXPECT_EQ(d.str(), "x1^2*x2 + 2");
}

// At a stationary point T_g(u) = u(y*), and y* = x1/(1 - l).
TEST(Gateaux, QuadraticClosedForm) {
    Truncation t;
    ClassicalGenFun s = classical_limit(G("x1*q1 + 1/2*q1^2", 1, 1, t));
    BiSeries d = gateaux_derivative(s, Y("1/2*y1^2"), Y("y1"));
    EXPECT_EQ(d.str(), expected("x1 + l*x1 + l^2*x1 + l^3*x1 + l^4*x1", d).str());
}
