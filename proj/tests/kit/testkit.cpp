#include "testkit.hpp"

#include <functional>
#include <optional>
#include <vector>

#include "microformal/errors.hpp"
#include "microformal/genfun.hpp"

namespace mftest {

BiSeries random_series(InstanceGenerator& gen, const ContextPtr& ctx, const Grading& g, int min_m, int terms,
                       int max_degree) {
    std::vector<std::size_t> vars;
    for (std::size_t v = 0; v < ctx->size(); ++v)
        vars.push_back(v);
    BiSeries out(ctx, g);
    for (int t = 0; t < terms; ++t) {
        int m = gen.between(min_m, g.M);
        int j = gen.between(-m, g.cap - m);
        out += BiSeries::term(m, j, gen.poly(ctx, vars, gen.between(1, 2), 0, max_degree), g);
    }
    return out;
}

namespace {

Grading random_grading(InstanceGenerator& gen) {
    Truncation t{gen.between(1, 4), gen.between(0, 3), 4, {}};
    return t.amplitude();
}

PropertyRun run(const std::string& name, std::uint64_t seed, int cases,
                const std::function<std::string(InstanceGenerator&)>& body) {
    PropertyRun r{name, cases, 0, {}};
    for (int c = 0; c < cases; ++c) {
        InstanceGenerator gen(seed * 1000003ULL + static_cast<std::uint64_t>(c));
        std::string w;
        try {
            w = body(gen);
        } catch (const Error& e) {
            w = std::string("error: ") + e.what();
        }
        if (!w.empty() && r.failures++ == 0)
            r.witness = "case " + std::to_string(c) + ": " + w;
    }
    return r;
}

} // namespace

PropertyRun exp_log_roundtrip(std::uint64_t seed, int cases) {
    return run("exp_log_roundtrip", seed, cases, [](InstanceGenerator& gen) -> std::string {
        Grading g = random_grading(gen);
        ContextPtr ctx = source_context(gen.between(1, 2));
        BiSeries a = random_series(gen, ctx, g, 1, gen.between(1, 3), 2);
        if (auto d = first_difference(bs_log(bs_exp(a)), a); !d.empty())
            return "log(exp(a)) - a = " + d;
        BiSeries one_plus = BiSeries::one(ctx, g) + a;
        if (auto d = first_difference(bs_exp(bs_log(one_plus)), one_plus); !d.empty())
            return "exp(log(1 + a)) - (1 + a) = " + d;
        BiSeries b = random_series(gen, ctx, g, 1, 2, 2);
        return first_difference(bs_exp(a) * bs_exp(b), bs_exp(a + b));
    });
}

PropertyRun truncation_congruence(std::uint64_t seed, int cases) {
    return run("truncation_congruence", seed, cases, [](InstanceGenerator& gen) -> std::string {
        Truncation small{gen.between(1, 3), gen.between(0, 3), 4, {}};
        Truncation large{small.M + 1, small.J + 1, 4, {}};
        Grading gs = small.amplitude(), gl = large.amplitude();
        ContextPtr ctx = source_context(gen.between(1, 2));
        BiSeries a = random_series(gen, ctx, gl, 0, gen.between(1, 4), 2);
        BiSeries b = random_series(gen, ctx, gl, 0, gen.between(1, 4), 2);
        BiSeries c = random_series(gen, ctx, gl, 1, gen.between(1, 3), 2);
        if (auto d = first_difference((a * b).reframe(gs), a.reframe(gs) * b.reframe(gs)); !d.empty())
            return "product " + d;
        if (auto d = first_difference((a + b).reframe(gs), a.reframe(gs) + b.reframe(gs)); !d.empty())
            return "sum " + d;
        return first_difference(bs_exp(c).reframe(gs), bs_exp(c.reframe(gs)));
    });
}

PropertyRun leibniz_rule(std::uint64_t seed, int cases) {
    return run("leibniz", seed, cases, [](InstanceGenerator& gen) -> std::string {
        Grading g = random_grading(gen);
        int n = gen.between(1, 2);
        ContextPtr ctx = target_context(n);
        BiSeries a = random_series(gen, ctx, g, 0, gen.between(1, 4), 3);
        BiSeries b = random_series(gen, ctx, g, 0, gen.between(1, 4), 3);
        std::size_t v = static_cast<std::size_t>(gen.between(0, n - 1));
        BiSeries lhs = partial_derivative(a * b, v);
        BiSeries rhs = partial_derivative(a, v) * b + a * partial_derivative(b, v);
        if (auto d = first_difference(lhs, rhs); !d.empty())
            return "series " + d;
        Poly p = a.coefficient(0, 0), q = b.coefficient(0, 0);
        if (partial_derivative(p * q, v) != partial_derivative(p, v) * q + p * partial_derivative(q, v))
            return "poly d(pq) != dp q + p dq";
        return {};
    });
}

PropertyRun substitution_homomorphism(std::uint64_t seed, int cases) {
    return run("substitution_homomorphism", seed, cases, [](InstanceGenerator& gen) -> std::string {
        Grading g = random_grading(gen);
        int n = gen.between(1, 2);
        ContextPtr from = target_context(n);
        ContextPtr to = source_context(gen.between(1, 2));
        BiSeries a = random_series(gen, from, g, 0, gen.between(1, 3), 2);
        BiSeries b = random_series(gen, from, g, 0, gen.between(1, 3), 2);
        std::vector<std::optional<BiSeries>> images;
        std::map<std::string, Poly> poly_images;
        for (int k = 0; k < n; ++k) {
            images.emplace_back(random_series(gen, to, g, 0, gen.between(1, 2), 2));
            poly_images.emplace((*from)[static_cast<std::size_t>(k)].name, images.back()->coefficient(0, 0));
        }
        if (auto d = first_difference(evaluate(a * b, images), evaluate(a, images) * evaluate(b, images)); !d.empty())
            return "product " + d;
        if (auto d = first_difference(evaluate(a + b, images), evaluate(a, images) + evaluate(b, images)); !d.empty())
            return "sum " + d;
        Poly p = a.coefficient(0, 0), q = b.coefficient(0, 0);
        if (substitute(p * q, to, poly_images) != substitute(p, to, poly_images) * substitute(q, to, poly_images))
            return "poly substitution is not multiplicative";
        return {};
    });
}

} // namespace mftest
