#include <gtest/gtest.h>

#include "microformal/errors.hpp"
#include "microformal/exactring.hpp"
#include "microformal/parse.hpp"

using namespace microformal;

namespace {

ContextPtr xy() { return Context::make(std::vector<std::string>{"x1", "y1", "y2"}); }

Poly P(const std::string& text, const ContextPtr& ctx = xy()) { return parse_poly(text, ctx); }

} // namespace

TEST(GaussRat, CanonicalFractions) {
    GaussRat a = GaussRat::fraction(6, -4);
    EXPECT_EQ(a.re(), mpq_class(-3, 2));
    EXPECT_EQ(a.str(), "-3/2");
    EXPECT_THROW(GaussRat::fraction(1, 0), Error);
}

TEST(GaussRat, ImaginaryUnitSquaresToMinusOne) {
    EXPECT_EQ(GaussRat::i() * GaussRat::i(), GaussRat(-1));
    GaussRat z(mpq_class(1, 2), mpq_class(1));
    EXPECT_EQ(z * z.inverse(), GaussRat(1));
    EXPECT_EQ(z.str(), "(1/2 + i)");
    EXPECT_EQ(GaussRat(0, mpq_class(-1, 2)).str(), "-1/2i");
    EXPECT_THROW(GaussRat(0).inverse(), Error);
}

TEST(Poly, DifferenceOfSquares) {
    EXPECT_EQ(P("(x1 + 1)*(x1 - 1)"), P("x1^2 - 1"));
}

TEST(Poly, TimesZeroIsEmpty) {
    Poly z = P("x1^2 + y1") * Poly(xy());
    EXPECT_TRUE(z.is_zero());
    EXPECT_TRUE(z.terms().empty());
}

TEST(Poly, ConjugateSum) {
    EXPECT_EQ(P("(1/2 + i)*x1 + (1/2 - i)*x1"), P("x1"));
}

TEST(Poly, MismatchedContextsThrow) {
    Poly a = P("x1");
    Poly b = parse_poly("x1", Context::make(std::vector<std::string>{"x1"}));
    EXPECT_THROW(a + b, ContextError);
    EXPECT_THROW(a * b, ContextError);
}

TEST(Poly, GrlexPrinting) {
    EXPECT_EQ(P("1 + y1 + x1*y1^2 + x1^3").str(), "x1^3 + x1*y1^2 + y1 + 1");
}

TEST(PartialDerivative, PowerRule) {
    EXPECT_EQ(partial_derivative(P("y1^2*y2"), "y1"), P("2*y1*y2"));
}

TEST(PartialDerivative, ConstantVanishes) {
    EXPECT_TRUE(partial_derivative(P("7/3"), "y1").is_zero());
}

TEST(PartialDerivative, RepeatedMatchesSecondDerivative) {
    Poly p = P("1/6*y1^3");
    Poly twice = partial_derivative(partial_derivative(p, "y1"), "y1");
    EXPECT_EQ(twice, P("y1"));
}

TEST(PartialDerivative, UnknownVariable) {
    EXPECT_THROW(partial_derivative(P("y1"), "q7"), ContextError);
}

TEST(Substitute, ShiftedSquare) {
    ContextPtr x = Context::make(std::vector<std::string>{"x1"});
    ContextPtr y = Context::make(std::vector<std::string>{"y1"});
    EXPECT_EQ(substitute(P("y1^2", y), x, {{"y1", P("x1 + 1", x)}}), P("x1^2 + 2*x1 + 1", x));
}

TEST(Substitute, Identity) {
    Poly p = P("x1*y1^2 - 3/4*y2 + i");
    EXPECT_EQ(substitute(p, xy(), {{"x1", P("x1")}, {"y1", P("y1")}, {"y2", P("y2")}}), p);
}

TEST(Substitute, Product) {
    ContextPtr x = Context::make(std::vector<std::string>{"x1"});
    ContextPtr y = Context::make(std::vector<std::string>{"y1", "y2"});
    EXPECT_EQ(substitute(P("y1*y2", y), x, {{"y1", P("x1^2", x)}, {"y2", P("-x1", x)}}), P("-x1^3", x));
}

TEST(Substitute, MissingImage) {
    ContextPtr x = Context::make(std::vector<std::string>{"x1"});
    ContextPtr y = Context::make(std::vector<std::string>{"y1", "y2"});
    EXPECT_THROW(substitute(P("y1*y2", y), x, {{"y1", P("x1", x)}}), ContextError);
}

TEST(Context, NilpotentVariable) {
    ContextPtr c = Context::make(std::vector<Variable>{{"x1", false}, {"eps", true}});
    Poly e = Poly::variable(c, "eps");
    EXPECT_TRUE((e * e).is_zero());
    EXPECT_EQ((Poly::variable(c, "x1") + e) * (Poly::variable(c, "x1") - e), parse_poly("x1^2", c));
}
