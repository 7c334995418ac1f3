#include "microformal/genfun.hpp"

#include <algorithm>

#include "detail.hpp"
#include "microformal/errors.hpp"

namespace microformal {

using detail::indexed;

ContextPtr source_context(int n1) {
    std::vector<std::string> names;
    for (int a = 1; a <= n1; ++a)
        names.push_back(indexed("x", a));
    return Context::make(names);
}

ContextPtr genfun_context(int n1, int n2) {
    std::vector<std::string> names;
    for (int a = 1; a <= n1; ++a)
        names.push_back(indexed("x", a));
    for (int i = 1; i <= n2; ++i)
        names.push_back(indexed("q", i));
    return Context::make(names);
}

ContextPtr target_context(int n2) {
    std::vector<std::string> names;
    for (int i = 1; i <= n2; ++i)
        names.push_back(indexed("y", i));
    return Context::make(names);
}

std::vector<Variable> parameters_of(const Context& ctx, int n_y) {
    std::vector<Variable> params;
    for (const auto& v : ctx.variables()) {
        bool is_y = false;
        for (int i = 1; i <= n_y; ++i)
            is_y = is_y || v.name == indexed("y", i);
        if (!is_y)
            params.push_back(v);
    }
    return params;
}

namespace {

std::vector<std::size_t> momentum_indices(int n1, int n2) {
    std::vector<std::size_t> idx;
    for (int i = 0; i < n2; ++i)
        idx.push_back(static_cast<std::size_t>(n1 + i));
    return idx;
}

void validate_common(int n1, int n2, const Truncation& t, const BiSeries& s) {
    if (n1 < 1 || n2 < 1)
        throw ValidationError("generating function dimensions must be positive");
    if (!same_context(s.context(), genfun_context(n1, n2)))
        throw ContextError("generating function must live in " + genfun_context(n1, n2)->str() + ", got " +
                           s.context()->str());
    if (!(s.grading() == t.phase()))
        throw TruncationError("generating function must use the phase grading of its truncation");
    auto qs = momentum_indices(n1, n2);
    for (const auto& [k, p] : s.terms()) {
        if (k.second < 0)
            throw ValidationError("generating function has a negative power of h");
        if (p.degree_in(qs) > t.K)
            throw TruncationError("momentum degree " + std::to_string(p.degree_in(qs)) + " exceeds K=" +
                                  std::to_string(t.K));
    }
}

} // namespace

GenFun::GenFun(int n1, int n2, Truncation t, BiSeries s) : n1_(n1), n2_(n2), trunc_(t), series_(std::move(s)) {}

GenFun GenFun::from_series(int n1, int n2, const Truncation& t, const BiSeries& s) {
    validate_common(n1, n2, t, s);
    auto qs = momentum_indices(n1, n2);
    BiSeries graded(s.context(), s.grading());
    for (const auto& [k, p] : s.terms()) {
        if (k.first != 0)
            throw ValidationError("generating function input must be lambda-free");
        auto low = p.filter([&](const Monomial& m) {
            unsigned d = 0;
            for (auto q : qs)
                d += m.exponent(q);
            return d <= 1;
        });
        graded += BiSeries::term(0, k.second, low, s.grading());
        graded += BiSeries::term(1, k.second, p - low, s.grading());
    }
    return GenFun(n1, n2, t, std::move(graded));
}

GenFun GenFun::from_graded(int n1, int n2, const Truncation& t, const BiSeries& s) {
    validate_common(n1, n2, t, s);
    auto qs = momentum_indices(n1, n2);
    for (const auto& [k, p] : s.terms())
        if (k.first == 0 && p.degree_in(qs) >= 2)
            throw ValuationError("higher part of a graded generating function needs lambda-valuation >= 1");
    return GenFun(n1, n2, t, s);
}

BiSeries GenFun::coefficient(const std::vector<unsigned>& alpha) const {
    if (alpha.size() != static_cast<std::size_t>(n2_))
        throw ContextError("multi-index length must equal the target dimension");
    auto src = source_context(n1_);
    BiSeries out(src, series_.grading());
    for (const auto& [k, p] : series_.terms()) {
        std::vector<Poly::Term> terms;
        for (const auto& [m, c] : p.terms()) {
            bool match = true;
            for (int i = 0; i < n2_ && match; ++i)
                match = m.exponent(static_cast<std::size_t>(n1_ + i)) == alpha[static_cast<std::size_t>(i)];
            if (!match)
                continue;
            Monomial stripped;
            for (int a = 0; a < n1_; ++a)
                if (unsigned e = m.exponent(static_cast<std::size_t>(a)))
                    stripped = stripped.with_exponent(static_cast<std::size_t>(a), e);
            terms.emplace_back(stripped, c);
        }
        out += BiSeries::term(k.first, k.second, Poly::from_terms(src, std::move(terms)), series_.grading());
    }
    return out;
}

int GenFun::momentum_degree() const {
    auto qs = momentum_indices(n1_, n2_);
    int d = -1;
    for (const auto& [k, p] : series_.terms())
        d = std::max(d, p.degree_in(qs));
    return d;
}

bool GenFun::is_hbar_free() const {
    return std::all_of(series_.terms().begin(), series_.terms().end(),
                       [](const auto& kv) { return kv.first.second == 0; });
}

Decomposition decompose(const GenFun& s) {
    int n1 = s.source_dim(), n2 = s.target_dim();
    std::vector<unsigned> alpha(static_cast<std::size_t>(n2), 0);
    BiSeries constant = s.coefficient(alpha);
    std::vector<BiSeries> map;
    for (int i = 0; i < n2; ++i) {
        alpha.assign(static_cast<std::size_t>(n2), 0);
        alpha[static_cast<std::size_t>(i)] = 1;
        map.push_back(s.coefficient(alpha));
    }
    auto qs = momentum_indices(n1, n2);
    BiSeries higher = s.series().map(
        [&](const Poly& p) {
            return p.filter([&](const Monomial& m) {
                unsigned d = 0;
                for (auto q : qs)
                    d += m.exponent(q);
                return d >= 2;
            });
        },
        s.context());
    return {std::move(constant), std::move(map), GenFun::from_graded(n1, n2, s.truncation(), higher)};
}

ClassicalGenFun::ClassicalGenFun(GenFun s) : s_(std::move(s)) {
    if (!s_.is_hbar_free())
        throw ValidationError("classical generating function must be free of h");
}

ClassicalGenFun classical_limit(const GenFun& s) {
    BiSeries s0 = s.series().filter([](int, int j) { return j == 0; });
    return ClassicalGenFun(GenFun::from_graded(s.source_dim(), s.target_dim(), s.truncation(), s0));
}

BiSeries classical_pullback(const ClassicalGenFun& cs, const Poly& g) {
    const GenFun& s = cs.genfun();
    const int n1 = s.source_dim(), n2 = s.target_dim();
    const Grading grading = s.truncation().phase();
    const ContextPtr& gctx = g.context();
    for (int i = 1; i <= n2; ++i)
        if (!gctx->index_of(indexed("y", i)))
            throw ContextError("function context " + gctx->str() + " lacks " + indexed("y", i));

    std::vector<Variable> xvars;
    for (int a = 1; a <= n1; ++a)
        xvars.push_back({indexed("x", a), false});
    for (auto& p : parameters_of(*gctx, n2)) {
        if (p.name.size() > 1 && (p.name[0] == 'x' || p.name[0] == 'q') &&
            std::all_of(p.name.begin() + 1, p.name.end(), ::isdigit))
            throw ContextError("function variable '" + p.name + "' clashes with generating-function variables");
        xvars.push_back(p);
    }
    ContextPtr xctx = Context::make(std::move(xvars));

    Decomposition dec = decompose(s);
    BiSeries s0 = detail::embed(dec.constant, xctx);
    std::vector<BiSeries> phi;
    for (const auto& f : dec.map)
        phi.push_back(detail::embed(f, xctx));
    const BiSeries& higher = dec.higher.series();
    std::vector<BiSeries> d_higher;
    for (int i = 0; i < n2; ++i)
        d_higher.push_back(partial_derivative(higher, static_cast<std::size_t>(n1 + i)));
    std::vector<BiSeries> grad_g;
    for (int i = 1; i <= n2; ++i)
        grad_g.push_back(BiSeries::constant(partial_derivative(g, indexed("y", i)), grading));

    auto with_momenta = [&](const std::vector<BiSeries>& q) {
        std::map<std::string, BiSeries> over;
        for (int i = 0; i < n2; ++i)
            over.emplace(indexed("q", i + 1), q[static_cast<std::size_t>(i)]);
        return detail::images_for(*s.context(), xctx, grading, over);
    };
    auto with_points = [&](const std::vector<BiSeries>& y) {
        std::map<std::string, BiSeries> over;
        for (int i = 0; i < n2; ++i)
            over.emplace(indexed("y", i + 1), y[static_cast<std::size_t>(i)]);
        return detail::images_for(*gctx, xctx, grading, over);
    };
    auto momenta_at = [&](const std::vector<BiSeries>& y) {
        auto img = with_points(y);
        std::vector<BiSeries> q;
        for (const auto& d : grad_g)
            q.push_back(evaluate(d, img));
        return q;
    };
    auto points_at = [&](const std::vector<BiSeries>& q) {
        auto img = with_momenta(q);
        std::vector<BiSeries> y;
        for (int i = 0; i < n2; ++i)
            y.push_back(phi[static_cast<std::size_t>(i)] + evaluate(d_higher[static_cast<std::size_t>(i)], img));
        return y;
    };

    std::vector<BiSeries> y = phi;
    std::vector<BiSeries> q = momenta_at(y);
    for (int step = 0; step <= grading.M; ++step) {
        y = points_at(q);
        q = momenta_at(y);
    }
    std::vector<BiSeries> y_next = points_at(q);
    if (y_next != y || momenta_at(y_next) != q)
        throw InternalError("stationary-point iteration did not settle within M+1 steps");

    BiSeries f = s0 + evaluate(higher, with_momenta(q)) + evaluate(BiSeries::constant(g, grading), with_points(y));
    for (int i = 0; i < n2; ++i)
        f += (phi[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) * q[static_cast<std::size_t>(i)];
    return f;
}

BiSeries gateaux_derivative(const ClassicalGenFun& s, const Poly& g, const Poly& u) {
    if (!same_context(g.context(), u.context()))
        throw ContextError("g and u must share a context");
    const std::string eps = "eps";
    if (g.context()->index_of(eps))
        throw ContextError("function context already uses the name 'eps'");
    auto vars = g.context()->variables();
    vars.push_back({eps, true});
    ContextPtr ectx = Context::make(std::move(vars));
    Poly perturbed = embed(g, ectx) + Poly::variable(ectx, eps) * embed(u, ectx);

    BiSeries f = classical_pullback(s, perturbed);
    const ContextPtr& fctx = f.context();
    std::size_t e = fctx->require(eps);
    std::vector<Variable> out_vars;
    for (const auto& v : fctx->variables())
        if (v.name != eps)
            out_vars.push_back(v);
    ContextPtr out_ctx = Context::make(std::move(out_vars));
    return f.map(
        [&](const Poly& p) {
            std::vector<Poly::Term> terms;
            for (const auto& [m, c] : p.terms())
                if (m.exponent(e) == 1)
                    terms.emplace_back(m.with_exponent(e, 0), c);
            return embed(Poly::from_terms(fctx, std::move(terms)), out_ctx);
        },
        out_ctx);
}

} // namespace microformal
