#include <gtest/gtest.h>

#include "kit/testkit.hpp"
#include "microformal/errors.hpp"
#include "microformal/quantum.hpp"

using namespace microformal;
using mftest::expected;

namespace {

GenFun G(const std::string& text, int n1, int n2, Truncation t = {}) {
    return GenFun::from_series(n1, n2, t, parse_series(text, genfun_context(n1, n2), t.phase()));
}

WaveFunction W(const std::string& amp, const std::string& phase, int n2, const Truncation& t) {
    ContextPtr y = target_context(n2);
    SeriesOptions o{false, true};
    WaveFunction w(y, n2, t);
    w.add_term(parse_series(amp, y, t.amplitude(), o), parse_series(phase, y, t.phase(), o));
    return w;
}

WaveFunction pure(const std::string& g, int n2, const Truncation& t) {
    return WaveFunction::pure_phase(parse_poly(g, target_context(n2)), n2, t);
}

} // namespace

TEST(WaveFunction, Invariants) {
    Truncation t{2, 2, 4, {}};
    ContextPtr y = target_context(1);
    WaveFunction w(y, 1, t);
    SeriesOptions o{true, true};
    EXPECT_THROW(w.add_term(BiSeries::one(y, t.amplitude()), parse_series("l*y1", y, t.phase(), o)), Error);
    EXPECT_THROW(w.add_term(BiSeries::one(y, t.amplitude()), parse_series("h^-1*y1", y, t.phase(), o)), Error);
    EXPECT_THROW(w.add_term(BiSeries::one(y, t.phase()), BiSeries(y, t.phase())), TruncationError);
    EXPECT_TRUE(w.empty());
}

TEST(QuantumPullback, OrdinaryMapSubstitutes) {
    Truncation t{2, 2, 4, {}};
    PulledBack p = quantum_pullback(G("x1^2 + (x1 + x2)*q1", 2, 1, t), W("1 + h*y1", "y1^2", 1, t));
    ASSERT_EQ(p.terms().size(), 1U);
    EXPECT_EQ(p.terms()[0].amplitude.str(), "1 + h*x1 + h*x2");
    EXPECT_EQ(p.terms()[0].phase.str(), "2*x1^2 + 2*x1*x2 + x2^2");
}

TEST(QuantumPullback, QuadraticFirstOrder) {
    Truncation t{1, 1, 4, {}};
    PulledBack p = quantum_pullback(G("x1*q1 + 1/2*q1^2", 1, 1, t), pure("1/2*y1^2", 1, t));
    const WaveTerm& r = p.terms().at(0);
    EXPECT_EQ(r.amplitude.str(), expected("1 + l*h^-1*1/2i*x1^2 + l*1/2", r.amplitude).str());
    EXPECT_EQ(r.phase.str(), "1/2*x1^2");
}

TEST(QuantumPullback, LinearAmplitudeHasNoSecondDerivative) {
    Truncation t{3, 2, 4, {}};
    PulledBack p = quantum_pullback(G("x1^2 + (x1 + h)*q1 + 1/2*q1^2", 1, 1, t), W("y1", "0", 1, t));
    const WaveTerm& r = p.terms().at(0);
    EXPECT_EQ(r.amplitude.str(), "x1 + h");
    EXPECT_EQ(r.phase.str(), "x1^2");
}

TEST(QuantumPullback, Linearity) {
    Truncation t{2, 2, 4, {}};
    GenFun s = G("x1*q1 + 1/3*x1*q1^2 - q1^3 + h*q1^2", 1, 1, t);
    WaveFunction w1 = W("1 + y1", "y1^2", 1, t), w2 = W("h*y1^2", "y1^3 - y1", 1, t);
    WaveFunction both = w1;
    both += w2;
    PulledBack a = quantum_pullback(s, both), b = quantum_pullback(s, w1), c = quantum_pullback(s, w2);
    ASSERT_EQ(a.terms().size(), 2U);
    EXPECT_EQ(a.terms()[0].amplitude, b.terms()[0].amplitude);
    EXPECT_EQ(a.terms()[1].amplitude, c.terms()[0].amplitude);
    EXPECT_EQ(a.terms()[1].phase, c.terms()[0].phase);
}

TEST(QuantumPullback, DimensionMismatch) {
    Truncation t;
    EXPECT_THROW(quantum_pullback(G("x1*q1 + x1*q2", 1, 2, t), pure("y1", 1, t)), Error);
    EXPECT_THROW(quantum_pullback(G("x1*q1", 1, 1, Truncation{2, 2, 4, {}}), pure("y1", 1, t)), Error);
}

// Plane wave: the operator acts on e^{(i/h) y.r} by multiplication with
// e^{(i/h) l S+(x, r)}.
TEST(QuantumPullback, PlaneWaveEigenproperty) {
    Truncation t{3, 3, 4, {}};
    ContextPtr yr = Context::make(std::vector<std::string>{"y1", "r1"});
    WaveFunction w = WaveFunction::pure_phase(parse_poly("y1*r1", yr), 1, t);
    GenFun s = G("x1*q1 + 2/3*x1*q1^2 - 1/4*q1^3", 1, 1, t);
    OscillatorySum applied = apply_higher_part(s, w);
    ASSERT_EQ(applied.terms().size(), 1U);
    const BiSeries& amp = applied.terms()[0].amplitude;
    SeriesOptions o{true, true};
    BiSeries lsplus = parse_series("l*(2/3*x1*r1^2 - 1/4*r1^3)", amp.context(), t.phase(), o);
    EXPECT_EQ(amp, bs_exp(lsplus.times_i_over_hbar()).reframe(amp.grading()));
}

TEST(ExponentExtract, PurePhase) {
    Truncation t{2, 2, 4, {}};
    PulledBack p = quantum_pullback(G("x1*q1", 1, 1, t), pure("y1^3 - y1", 1, t));
    EXPECT_EQ(exponent_extract(p).str(), "x1^3 - x1");
}

// Gaussian closed form: e^{(l h / 2i) d^2} e^{(i/h) y^2/2} =
// (1 - l)^{-1/2} e^{(i/h) y^2 / (2 (1 - l))}, so
// f = x1^2 / (2 (1 - l)) - (i h / 2) sum_k l^k / k.
TEST(ExponentExtract, QuadraticGaussian) {
    Truncation t;
    BiSeries f = exponent_extract(quantum_pullback(G("x1*q1 + 1/2*q1^2", 1, 1, t), pure("1/2*y1^2", 1, t)));
    EXPECT_EQ(f.str(), expected("1/2*x1^2 + l*1/2*x1^2 - l*h*1/2i + l^2*1/2*x1^2 - l^2*h*1/4i"
                                " + l^3*1/2*x1^2 - l^3*h*1/6i + l^4*1/2*x1^2 - l^4*h*1/8i",
                                f)
                           .str());
    EXPECT_EQ(f.filter([](int m, int) { return m <= 1; }).str(), "1/2*x1^2 + l*1/2*x1^2 - l*h*1/2i");
}

TEST(ExponentExtract, IrregularInputAllowed) {
    Truncation t{2, 2, 4, {}};
    ContextPtr x = source_context(1);
    SeriesOptions o{true, false};
    PulledBack p(x, t);
    p.add_term(bs_exp(parse_series("l*x1", x, t.amplitude(), o)), BiSeries(x, t.phase()));
    BiSeries f = exponent_extract(p);
    EXPECT_EQ(f.str(), expected("-l*h*i*x1", f).str());
}

TEST(ExponentExtract, Errors) {
    Truncation t{2, 2, 4, {}};
    ContextPtr x = source_context(1);
    PulledBack two(x, t);
    two.add_term(BiSeries::one(x, t.amplitude()), BiSeries(x, t.phase()));
    two.add_term(BiSeries::one(x, t.amplitude()), BiSeries(x, t.phase()));
    EXPECT_THROW(exponent_extract(two), Error);
    PulledBack scaled(x, t);
    scaled.add_term(BiSeries::one(x, t.amplitude()) * GaussRat(2), BiSeries(x, t.phase()));
    EXPECT_THROW(exponent_extract(scaled), ValuationError);
}

TEST(Compose, IdentityOnEitherSide) {
    Truncation t{3, 3, 4, {}};
    GenFun s = G("x1^2 + x1*q1 - 1/2*x1*q1^2 + 1/3*q1^3 + h*q1^2", 1, 1, t);
    GenFun id = G("x1*q1", 1, 1, t);
    EXPECT_EQ(compose(s, id), s);
    EXPECT_EQ(compose(id, s), s);
}

TEST(Compose, OrdinaryMaps) {
    Truncation t{2, 2, 4, {}};
    GenFun phi = G("x1^2*q1 + (x1 - 1)*q2", 1, 2, t);
    GenFun psi = G("x1*x2*q1 + 2*x2*q2", 2, 2, t);
    EXPECT_EQ(compose(phi, psi).str(), "x1^3*q1 - x1^2*q1 + 2*x1*q2 - 2*q2");
}

TEST(Compose, Errors) {
    Truncation t{2, 2, 4, {}};
    EXPECT_THROW(compose(G("x1*q1", 1, 1, t), G("x1*q1 + x2*q2", 2, 2, t)), Error);
    // First order: -l h^2 d^3 e^{a y^2} with a = i r/h gives (h/i) l (12 a^2 y + 8 a^3 y^3).
    Truncation k3{2, 2, 3, {}};
    GenFun cubic = G("x1*q1 + q1^3", 1, 1, k3), square = G("x1^2*q1", 1, 1, k3);
    EXPECT_EQ(compose(cubic, square).str(), "x1^2*q1 + l*8*x1^3*q1^3 - l*h*12i*x1*q1^2 - l^2*h^2*60*q1^3");
    EXPECT_THROW(compose(cubic, square, MomentumOverflow::strict), TruncationError);
    EXPECT_NO_THROW(compose(cubic, square, MomentumOverflow::strict, 5));
}

TEST(LinearChange, Identity) {
    Truncation t;
    GenFun s = G("x1*q1 + x2*q2 + q1*q2^2", 2, 2, t);
    EXPECT_EQ(linear_change(s, identity_matrix(2)), s);
}

TEST(LinearChange, ScalarMatrix) {
    Truncation t;
    GenFun s = linear_change(G("x1*q1 + 1/2*q1^2", 1, 1, t), Matrix{{GaussRat(2)}});
    EXPECT_EQ(s.str(), "1/2*x1*q1 + l*1/8*q1^2");
}

TEST(LinearChange, DiagonalOnDecoupled) {
    Truncation t;
    GenFun s = G("x1*q1 + x2*q2 + q1^2 + q2^3", 2, 2, t);
    Matrix a{{GaussRat(2), GaussRat(0)}, {GaussRat(0), GaussRat(3)}};
    EXPECT_EQ(linear_change(s, a).str(), "1/2*x1*q1 + 1/3*x2*q2 + l*1/27*q2^3 + l*1/4*q1^2");
}

TEST(LinearChange, Singular) {
    Truncation t;
    GenFun s = G("x1*q1 + x2*q2", 2, 2, t);
    EXPECT_THROW(linear_change(s, Matrix{{GaussRat(1), GaussRat(2)}, {GaussRat(2), GaussRat(4)}}), MatrixError);
    EXPECT_THROW(inverse(Matrix{{GaussRat(1), GaussRat(2)}}), MatrixError);
}

TEST(LinearChange, Covariance) {
    Truncation t{3, 3, 4, {}};
    GenFun s = G("x1*q1 + x1*x2*q2 - 1/2*q1*q2 + 1/3*x2*q1^2 + h*q2^2", 2, 2, t);
    WaveFunction w = W("1 + h*y2", "y1^2 - 1/2*y1*y2 + y2^3", 2, t);
    Matrix a{{GaussRat(1), GaussRat(2)}, {GaussRat::fraction(-1, 3), GaussRat(1)}};
    PulledBack direct = quantum_pullback(s, w);
    PulledBack changed = quantum_pullback(linear_change(s, a), linear_change(w, a));
    EXPECT_EQ(direct.terms()[0].amplitude, changed.terms()[0].amplitude);
    EXPECT_EQ(direct.terms()[0].phase, changed.terms()[0].phase);
}
