#include <gtest/gtest.h>

#include "kit/testkit.hpp"
#include "microformal/quantum.hpp"

using namespace microformal;

namespace {

GenFun G(const std::string& text, int n1, int n2, Truncation t = {}) {
    return GenFun::from_series(n1, n2, t, parse_series(text, genfun_context(n1, n2), t.phase()));
}

} // namespace

TEST(Verdict, Rendering) {
    EXPECT_EQ((Verdict{"classical_limit", true, "", 3}).line(), "PASS classical_limit seed=3");
    EXPECT_EQ((Verdict{"leibniz", false, "x1", 9}).line(), "FAIL leibniz seed=9 witness=x1");
}

TEST(Generator, Deterministic) {
    Truncation t;
    Sizes sizes;
    InstanceGenerator a(42), b(42);
    EXPECT_EQ(a.genfun(2, 2, t, sizes, true), b.genfun(2, 2, t, sizes, true));
    EXPECT_EQ(a.function(2, sizes), b.function(2, sizes));
    EXPECT_EQ(check_linear_covariance(5, sizes, t).line(), check_linear_covariance(5, sizes, t).line());
}

TEST(Generator, RespectsSizes) {
    Truncation t;
    Sizes sizes;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        InstanceGenerator gen(seed);
        GenFun s = gen.genfun(2, 2, t, sizes, true);
        EXPECT_LE(s.momentum_degree(), t.K);
        EXPECT_LE(gen.function(2, sizes).degree(), sizes.max_degree);
        Matrix a = gen.invertible(2);
        EXPECT_NO_THROW(inverse(a));
    }
}

TEST(ClassicalLimitCheck, QuadraticInstance) {
    Verdict v = classical_limit_instance(G("x1*q1 + 1/2*q1^2", 1, 1), parse_poly("1/2*y1^2", target_context(1)), 0);
    EXPECT_TRUE(v.passed) << v.line();
}

TEST(ClassicalLimitCheck, OrdinaryMapInstance) {
    Verdict v = classical_limit_instance(G("x1*x2 + x1^2*q1 - x2*q2", 2, 2),
                                         parse_poly("y1^3 + 1/2*y1*y2", target_context(2)), 0);
    EXPECT_TRUE(v.passed) << v.line();
}

TEST(ClassicalLimitCheck, MutationFailsAtFirstOrder) {
    Verdict v =
        classical_limit_instance(G("x1*q1 + 1/2*q1^2", 1, 1), parse_poly("1/2*y1^2", target_context(1)), 0, true);
    EXPECT_FALSE(v.passed);
    EXPECT_TRUE(v.witness.rfind("l*", 0) == 0 || v.witness.rfind("-l*", 0) == 0) << v.witness;
}

TEST(Checks, SmallSeedRange) {
    Truncation t{2, 2, 4, {}};
    for (const Verdict& v : run_all_checks(100, 3, Sizes{}, t))
        EXPECT_TRUE(v.passed) << v.line();
    for (const Verdict& v : run_all_checks(100, 2, Sizes{}, t, true))
        EXPECT_FALSE(v.passed) << v.line();
}
