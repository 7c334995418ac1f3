#include "microformal/verify.hpp"

#include <algorithm>

#include "detail.hpp"
#include "microformal/errors.hpp"

namespace microformal {

using detail::indexed;

std::string Verdict::line() const {
    std::string out = (passed ? "PASS " : "FAIL ") + name + " seed=" + std::to_string(seed);
    if (!witness.empty())
        out += " witness=" + witness;
    return out;
}

// ---------------------------------------------------------------- generator

std::uint64_t InstanceGenerator::below(std::uint64_t n) {
    if (n <= 1)
        return 0;
    // Rejection keeps the draw uniform and independent of the standard library.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do
        r = rng_();
    while (r >= limit);
    return r % n;
}

int InstanceGenerator::between(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

bool InstanceGenerator::coin(int num, int den) { return static_cast<int>(below(static_cast<std::uint64_t>(den))) < num; }

GaussRat InstanceGenerator::coefficient() {
    long num = between(1, 9);
    long den = between(1, 9);
    if (coin(1, 2))
        num = -num;
    return GaussRat::fraction(num, den);
}

Poly InstanceGenerator::poly(const ContextPtr& ctx, const std::vector<std::size_t>& vars, int terms, int lo,
                             int hi) {
    Poly out(ctx);
    for (int t = 0; t < terms; ++t) {
        int degree = between(lo, hi);
        Monomial m;
        for (int k = 0; k < degree && !vars.empty(); ++k) {
            std::size_t v = vars[below(vars.size())];
            m = m.with_exponent(v, m.exponent(v) + 1);
        }
        out += Poly::from_terms(ctx, {{m, coefficient()}});
    }
    return out;
}

namespace {

std::vector<std::size_t> range(int from, int count) {
    std::vector<std::size_t> out;
    for (int k = 0; k < count; ++k)
        out.push_back(static_cast<std::size_t>(from + k));
    return out;
}

} // namespace

GenFun InstanceGenerator::ordinary_map(int n1, int n2, const Truncation& t, const Sizes& sizes) {
    ContextPtr ctx = genfun_context(n1, n2);
    auto xs = range(0, n1);
    Poly s = coin(1, 2) ? poly(ctx, xs, 1, 1, sizes.max_degree) : Poly(ctx);
    for (int i = 0; i < n2; ++i) {
        // phi^i = c x_a + (random terms of degree <= 2)
        Poly phi = Poly::variable(ctx, static_cast<std::size_t>(between(0, n1 - 1))) * coefficient();
        phi += poly(ctx, xs, between(0, 1), 0, std::min(2, sizes.max_degree));
        s += phi * Poly::variable(ctx, static_cast<std::size_t>(n1 + i));
    }
    return GenFun::from_series(n1, n2, t, BiSeries::constant(s, t.phase()));
}

GenFun InstanceGenerator::genfun(int n1, int n2, const Truncation& t, const Sizes& sizes, bool hbar) {
    GenFun base = ordinary_map(n1, n2, t, sizes);
    ContextPtr ctx = base.context();
    auto xs = range(0, n1);
    auto qs = range(n1, n2);
    BiSeries s = base.series().filter([](int m, int) { return m == 0; });
    int higher = between(1, 2);
    for (int k = 0; k < higher; ++k) {
        int top = std::min(t.K, sizes.max_momentum);
        int qdeg = top >= 3 && coin(1, 3) ? between(3, top) : 2;
        Poly term = poly(ctx, qs, 1, qdeg, qdeg) * (coin(1, 2) ? poly(ctx, xs, 1, 1, 1) : Poly::constant(ctx, 1));
        s += BiSeries::constant(term, t.phase());
    }
    if (hbar && coin(1, 3)) {
        Poly term = poly(ctx, qs, 1, 0, 2) * poly(ctx, xs, 1, 0, 1);
        s += BiSeries::term(0, 1, term, t.phase());
    }
    return GenFun::from_series(n1, n2, t, s);
}

Poly InstanceGenerator::function(int n, const Sizes& sizes) {
    ContextPtr ctx = target_context(n);
    Poly g = Poly::variable(ctx, 0) * Poly::variable(ctx, 0) * coefficient();
    g += poly(ctx, range(0, n), between(0, 2), 1, sizes.max_degree);
    return g;
}

WaveFunction InstanceGenerator::wave(int n, const Truncation& t, const Sizes& sizes) {
    ContextPtr ctx = target_context(n);
    auto ys = range(0, n);
    BiSeries amp = BiSeries::constant(poly(ctx, ys, between(1, 2), 0, 2), t.amplitude());
    if (coin(1, 3))
        amp += BiSeries::term(0, 1, poly(ctx, ys, 1, 0, 1), t.amplitude());
    BiSeries phase = BiSeries::constant(poly(ctx, ys, between(1, 2), 1, std::min(3, sizes.max_degree)), t.phase());
    if (coin(1, 4))
        phase += BiSeries::term(0, 1, poly(ctx, ys, 1, 0, 1), t.phase());
    WaveFunction w(ctx, n, t);
    w.add_term(std::move(amp), std::move(phase));
    return w;
}

Matrix InstanceGenerator::invertible(int n) {
    for (;;) {
        Matrix a(static_cast<std::size_t>(n), std::vector<GaussRat>(static_cast<std::size_t>(n)));
        for (auto& row : a)
            for (auto& c : row)
                c = coin(1, 4) ? GaussRat(0) : coefficient();
        try {
            inverse(a);
            return a;
        } catch (const MatrixError&) {
        }
    }
}

// ----------------------------------------------------------------- helpers

std::string first_difference(const BiSeries& a, const BiSeries& b) {
    if (!same_context(a.context(), b.context()))
        return "contexts " + a.context()->str() + " vs " + b.context()->str();
    if (!(a.grading() == b.grading()))
        return "gradings " + a.grading().str() + " vs " + b.grading().str();
    BiSeries diff = a - b;
    if (diff.is_zero())
        return {};
    auto [k, p] = *diff.terms().begin();
    return BiSeries::term(k.first, k.second, p, diff.grading()).str_all();
}

namespace {

std::uint64_t stream(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer: distinct checks get unrelated streams
    std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + salt;
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
}

std::string compare_pulled(const OscillatorySum& a, const OscillatorySum& b) {
    if (a.terms().size() != b.terms().size())
        return "term counts " + std::to_string(a.terms().size()) + " vs " + std::to_string(b.terms().size());
    for (std::size_t k = 0; k < a.terms().size(); ++k) {
        const auto& ta = a.terms()[k];
        const auto& tb = b.terms()[k];
        if (auto w = first_difference(ta.phase, tb.phase); !w.empty())
            return "phase " + w;
        if (auto w = first_difference(ta.amplitude, tb.amplitude); !w.empty())
            return "amplitude " + w;
    }
    return {};
}

template <class F>
Verdict guarded(const std::string& name, std::uint64_t seed, F&& body) {
    Verdict v{name, false, {}, seed};
    try {
        v.witness = body();
    } catch (const Error& e) {
        v.witness = std::string("error: ") + e.what();
    }
    v.passed = v.witness.empty();
    return v;
}

GenFun shift_constant(const GenFun& s) {
    BiSeries lam = BiSeries::term(1, 0, Poly::constant(s.context(), 1), s.series().grading());
    return GenFun::from_graded(s.source_dim(), s.target_dim(), s.truncation(), s.series() + lam);
}

constexpr int kWaveFunctions = 10;
constexpr int kComposeK = 64;
// Composites of cubic S+ grow past K = 7 and make the check impractical.
constexpr int kComposeMomentum = 2;

} // namespace

// ----------------------------------------------------------------- checks

Verdict classical_limit_instance(const GenFun& s, const Poly& g, std::uint64_t seed, bool mutate) {
    return guarded("classical_limit", seed, [&]() -> std::string {
        const Truncation& t = s.truncation();
        BiSeries f = exponent_extract(quantum_pullback(s, WaveFunction::pure_phase(g, s.target_dim(), t)));
        for (const auto& [k, p] : f.terms())
            if (k.second < 0)
                return "irregular " + BiSeries::term(k.first, k.second, p, f.grading()).str_all();

        ClassicalGenFun classical = classical_limit(s);
        if (mutate) {
            const GenFun& c = classical.genfun();
            Poly q1 = Poly::variable(c.context(), "q1");
            BiSeries bump = BiSeries::term(1, 0, q1 * q1, c.series().grading());
            classical = ClassicalGenFun(
                GenFun::from_graded(c.source_dim(), c.target_dim(), t, c.series() + bump));
        }
        BiSeries expected = classical_pullback(classical, g);
        return first_difference(f.filter([](int, int j) { return j == 0; }), expected);
    });
}

Verdict check_classical_limit(std::uint64_t seed, const Sizes& sizes, const Truncation& t, bool mutate) {
    InstanceGenerator gen(stream(seed, 1));
    int n1 = gen.between(1, sizes.max_source), n2 = gen.between(1, sizes.max_target);
    GenFun s = gen.genfun(n1, n2, t, sizes, true);
    Poly g = gen.function(n2, sizes);
    return classical_limit_instance(s, g, seed, mutate);
}

Verdict check_derivative_homomorphism(std::uint64_t seed, const Sizes& sizes, const Truncation& t, bool mutate) {
    InstanceGenerator gen(stream(seed, 2));
    int n1 = gen.between(1, sizes.max_source), n2 = gen.between(1, sizes.max_target);
    return guarded("derivative_homomorphism", seed, [&]() -> std::string {
        ClassicalGenFun s(gen.genfun(n1, n2, t, sizes, false));
        Poly g = gen.function(n2, sizes);
        ContextPtr yctx = g.context();
        auto ys = range(0, n2);
        Poly u = gen.poly(yctx, ys, gen.between(1, 2), 0, 2) + Poly::variable(yctx, 0);
        Poly v = gen.poly(yctx, ys, gen.between(1, 2), 0, 2) + Poly::variable(yctx, ys.back());

        BiSeries one = gateaux_derivative(s, g, Poly::constant(yctx, 1));
        if (auto w = first_difference(one, BiSeries::one(one.context(), one.grading())); !w.empty())
            return "T(1) - 1 = " + w;
        BiSeries tu = gateaux_derivative(s, g, u);
        BiSeries tv = gateaux_derivative(s, g, v);
        BiSeries tuv = mutate ? tu + tv : gateaux_derivative(s, g, u * v);
        return first_difference(tuv, tu * tv);
    });
}

Verdict check_composition_coherence(std::uint64_t seed, const Sizes& sizes, const Truncation& t, bool mutate) {
    InstanceGenerator gen(stream(seed, 3));
    int n1 = gen.between(1, sizes.max_source), n2 = gen.between(1, sizes.max_target);
    int n3 = gen.between(1, sizes.max_source), n4 = gen.between(1, sizes.max_target);
    Sizes light = sizes;
    light.max_momentum = std::min(sizes.max_momentum, kComposeMomentum);
    return guarded("composition_coherence", seed, [&]() -> std::string {
        GenFun s1 = gen.genfun(n1, n2, t, light, true);
        GenFun s2 = gen.genfun(n2, n3, t, light, true);
        GenFun s3 = gen.coin(1, 2) ? gen.genfun(n3, n4, t, light, false) : gen.ordinary_map(n3, n4, t, sizes);

        GenFun c12 = compose(s1, s2, MomentumOverflow::strict, kComposeK);
        if (mutate)
            c12 = shift_constant(c12);
        for (int k = 0; k < kWaveFunctions; ++k) {
            WaveFunction w = gen.wave(n3, t, light);
            PulledBack direct = quantum_pullback(c12, w);
            PulledBack seq = quantum_pullback(s1, as_wave_function(quantum_pullback(s2, w), n2));
            if (auto d = compare_pulled(direct, seq); !d.empty())
                return "w" + std::to_string(k) + " " + d;
        }
        GenFun left = compose(c12, s3, MomentumOverflow::strict, kComposeK);
        GenFun right = compose(s1, compose(s2, s3, MomentumOverflow::strict, kComposeK), MomentumOverflow::strict,
                               kComposeK);
        if (auto d = first_difference(left.series(), right.series()); !d.empty())
            return "associativity " + d;
        return {};
    });
}

Verdict linear_covariance_instance(const GenFun& s, const WaveFunction& w, const Matrix& a, std::uint64_t seed,
                                   bool mutate) {
    return guarded("linear_covariance", seed, [&]() -> std::string {
        GenFun changed = linear_change(s, a);
        if (mutate)
            changed = shift_constant(changed);
        return compare_pulled(quantum_pullback(s, w), quantum_pullback(changed, linear_change(w, a)));
    });
}

Verdict check_linear_covariance(std::uint64_t seed, const Sizes& sizes, const Truncation& t, bool mutate) {
    InstanceGenerator gen(stream(seed, 4));
    int n1 = gen.between(1, sizes.max_source), n2 = gen.between(1, sizes.max_target);
    GenFun s = gen.genfun(n1, n2, t, sizes, true);
    WaveFunction w = gen.wave(n2, t, sizes);
    w += gen.wave(n2, t, sizes);
    Matrix a = gen.invertible(n2);
    return linear_covariance_instance(s, w, a, seed, mutate);
}

std::vector<Verdict> run_all_checks(std::uint64_t seed, int cases, const Sizes& sizes, const Truncation& t,
                                    bool mutate) {
    std::vector<Verdict> out;
    for (int c = 0; c < cases; ++c) {
        std::uint64_t s = seed + static_cast<std::uint64_t>(c);
        out.push_back(check_classical_limit(s, sizes, t, mutate));
        out.push_back(check_derivative_homomorphism(s, sizes, t, mutate));
        out.push_back(check_composition_coherence(s, sizes, t, mutate));
        out.push_back(check_linear_covariance(s, sizes, t, mutate));
    }
    return out;
}

} // namespace microformal
