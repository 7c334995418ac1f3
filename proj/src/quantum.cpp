#include "microformal/quantum.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "detail.hpp"
#include "microformal/errors.hpp"

namespace microformal {

using detail::indexed;

// ------------------------------------------------------------ wave terms

void OscillatorySum::add_term(BiSeries amplitude, BiSeries phase) {
    if (!same_context(amplitude.context(), ctx_) || !same_context(phase.context(), ctx_))
        throw ContextError("wave term must live in " + ctx_->str());
    if (!(amplitude.grading() == trunc_.amplitude()))
        throw TruncationError("amplitude must use the amplitude grading of the truncation");
    if (!(phase.grading() == trunc_.phase()))
        throw TruncationError("phase must use the phase grading of the truncation");
    for (const auto& [k, p] : phase.terms())
        if (k.first != 0 || k.second < 0)
            throw ValidationError("phase must be lambda-free and h-regular");
    terms_.push_back({std::move(amplitude), std::move(phase)});
}

WaveFunction::WaveFunction(ContextPtr ctx, int dim, Truncation t) : OscillatorySum(std::move(ctx), t), dim_(dim) {
    if (dim_ < 1)
        throw ValidationError("wave function dimension must be positive");
    for (int i = 1; i <= dim_; ++i)
        if (!ctx_->index_of(indexed("y", i)))
            throw ContextError("wave function context " + ctx_->str() + " lacks " + indexed("y", i));
}

WaveFunction WaveFunction::pure_phase(const Poly& g, int dim, const Truncation& t) {
    WaveFunction w(g.context(), dim, t);
    w.add_term(BiSeries::one(g.context(), t.amplitude()), BiSeries::constant(g, t.phase()));
    return w;
}

WaveFunction& WaveFunction::operator+=(const WaveFunction& o) {
    if (!same_context(ctx_, o.ctx_) || dim_ != o.dim_ || !(trunc_ == o.trunc_))
        throw ContextError("cannot add wave functions over different spaces");
    for (const auto& t : o.terms_)
        terms_.push_back(t);
    return *this;
}

WaveFunction WaveFunction::scaled(const BiSeries& c) const {
    for (const auto& [k, p] : c.terms())
        if (!p.is_constant())
            throw ValidationError("wave function scalars must have constant coefficients");
    BiSeries local = c.map([&](const Poly& p) { return Poly::constant(ctx_, p.constant_term()); }, ctx_);
    WaveFunction out(ctx_, dim_, trunc_);
    for (const auto& t : terms_)
        out.add_term(t.amplitude * local, t.phase);
    return out;
}

WaveFunction as_wave_function(const PulledBack& p, int dim) {
    std::map<std::string, std::string> renames;
    std::vector<Variable> vars;
    for (const auto& v : p.context()->variables()) {
        if (v.name.size() > 1 && v.name[0] == 'x' && std::all_of(v.name.begin() + 1, v.name.end(), ::isdigit)) {
            std::string y = "y" + v.name.substr(1);
            renames[v.name] = y;
            vars.push_back({y, v.nilpotent});
        } else {
            vars.push_back(v);
        }
    }
    ContextPtr ctx = Context::make(std::move(vars));
    WaveFunction w(ctx, dim, p.truncation());
    for (const auto& t : p.terms())
        w.add_term(detail::embed(t.amplitude, ctx, renames), detail::embed(t.phase, ctx, renames));
    return w;
}

// ------------------------------------------------------- operator machinery

namespace {

using MultiIndex = std::vector<unsigned>;

unsigned order_of(const MultiIndex& a) {
    unsigned k = 0;
    for (unsigned e : a)
        k += e;
    return k;
}

// e^{(i/h) S+(x, (h/i) d/dy)} written as a polynomial in zeta = h d/dy. The
// coefficients do not depend on y, so the zeta_i commute with them and the
// exponential is that of an ordinary commutative series.
struct Symbol {
    std::map<MultiIndex, BiSeries> coeffs; // amplitude grading
    // reach[d]: largest |beta| whose coefficient has lambda-valuation <= d
    std::vector<unsigned> reach;
};

Symbol exp_symbol(const GenFun& higher, const ContextPtr& ctx) {
    const int n1 = higher.source_dim(), n2 = higher.target_dim();
    const Grading ga = higher.truncation().amplitude();
    Grading gp = higher.truncation().phase();
    gp.degree_guard.reset(); // zeta powers are not part of the guarded degree

    auto vars = ctx->variables();
    const std::size_t z0 = vars.size();
    for (int i = 1; i <= n2; ++i)
        vars.push_back({"zeta#" + std::to_string(i), false});
    ContextPtr zctx = Context::make(std::move(vars));

    // (h/i)^k d^alpha = (-i)^k zeta^alpha
    BiSeries op(zctx, gp);
    for (const auto& [k, p] : higher.series().terms()) {
        std::vector<Poly::Term> terms;
        for (const auto& [m, c] : p.terms()) {
            Monomial z;
            unsigned order = 0;
            for (int a = 0; a < n1; ++a)
                if (unsigned e = m.exponent(static_cast<std::size_t>(a)))
                    z = z.with_exponent(ctx->require(indexed("x", a + 1)), e);
            GaussRat coeff = c;
            for (int i = 0; i < n2; ++i) {
                unsigned e = m.exponent(static_cast<std::size_t>(n1 + i));
                z = z.with_exponent(z0 + static_cast<std::size_t>(i), e);
                order += e;
            }
            for (unsigned t = 0; t < order; ++t)
                coeff *= -GaussRat::i();
            terms.emplace_back(z, coeff);
        }
        op += BiSeries::term(k.first, k.second, Poly::from_terms(zctx, std::move(terms)), gp);
    }
    BiSeries generator = op.times_i_over_hbar();
    BiSeries e = generator.is_zero() ? BiSeries::one(zctx, generator.grading()) : bs_exp(generator);

    Symbol sym;
    for (const auto& [k, p] : e.terms()) {
        std::map<MultiIndex, std::vector<Poly::Term>> split;
        for (const auto& [m, c] : p.terms()) {
            MultiIndex beta(static_cast<std::size_t>(n2));
            Monomial rest = m;
            for (int i = 0; i < n2; ++i) {
                std::size_t zi = z0 + static_cast<std::size_t>(i);
                beta[static_cast<std::size_t>(i)] = m.exponent(zi);
                rest = rest.with_exponent(zi, 0);
            }
            split[beta].emplace_back(rest, c);
        }
        for (auto& [beta, terms] : split) {
            auto it = sym.coeffs.try_emplace(beta, BiSeries(ctx, ga)).first;
            it->second += BiSeries::term(k.first, k.second, Poly::from_terms(ctx, std::move(terms)), ga);
        }
    }
    sym.reach.assign(static_cast<std::size_t>(ga.M + 1), 0);
    for (const auto& [beta, c] : sym.coeffs)
        for (int d = std::max(0, c.lambda_valuation()); d <= ga.M; ++d)
            sym.reach[static_cast<std::size_t>(d)] = std::max(sym.reach[static_cast<std::size_t>(d)], order_of(beta));
    return sym;
}

BiSeries times_hbar(const BiSeries& b) { return b.shifted(0, 1).reframe(b.grading()); }

struct Transport {
    std::vector<std::size_t> y_index; // positions of y1..yn in the wave-function context
    std::vector<BiSeries> idb;        // i * d b / d y_i, amplitude grading

    Transport(const WaveFunction& w, const WaveTerm& term) {
        const Grading ga = w.truncation().amplitude();
        for (int i = 1; i <= w.dimension(); ++i) {
            std::size_t y = w.context()->require(indexed("y", i));
            y_index.push_back(y);
            idb.push_back((partial_derivative(term.phase, y) * GaussRat::i()).reframe(ga));
        }
    }

    // D_i B = h dB/dy_i + B * i db/dy_i
    BiSeries step(const BiSeries& b, std::size_t i) const {
        return times_hbar(partial_derivative(b, y_index[i])) + b * idb[i];
    }
};

// D^gamma(a) for every gamma below some multi-index of the symbol. Parts at
// lambda orders no coefficient of high enough order can reach are dropped.
std::map<MultiIndex, BiSeries> derivative_table(const Symbol& sym, const Transport& tr, const BiSeries& a) {
    std::set<MultiIndex> needed;
    for (const auto& [beta, c] : sym.coeffs) {
        std::vector<MultiIndex> stack{beta};
        while (!stack.empty()) {
            MultiIndex g = stack.back();
            stack.pop_back();
            if (!needed.insert(g).second)
                continue;
            for (auto& e : g)
                if (e > 0) {
                    --e;
                    stack.push_back(g);
                    ++e;
                }
        }
    }
    std::vector<MultiIndex> order(needed.begin(), needed.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const MultiIndex& l, const MultiIndex& r) { return order_of(l) < order_of(r); });

    const int M = a.grading().M;
    std::map<MultiIndex, BiSeries> table;
    for (const auto& gamma : order) {
        unsigned k = order_of(gamma);
        BiSeries entry = a;
        if (k > 0) {
            std::size_t last = gamma.size();
            while (gamma[--last] == 0) {
            }
            MultiIndex prev = gamma;
            --prev[last];
            entry = tr.step(table.at(prev), last);
        }
        entry = entry.filter([&](int m, int) { return sym.reach[static_cast<std::size_t>(M - m)] >= k; });
        table.emplace(gamma, std::move(entry));
    }
    return table;
}

void check_compatible(const GenFun& s, const WaveFunction& w) {
    if (s.target_dim() != w.dimension())
        throw ValidationError("dimension mismatch: generating function targets dimension " +
                              std::to_string(s.target_dim()) + ", wave function has " +
                              std::to_string(w.dimension()));
    if (!(s.truncation().phase() == w.truncation().phase()))
        throw TruncationError("generating function and wave function use different truncations");
}

// (x..., params...) or, with the y-variables, (x..., y..., params...).
ContextPtr result_context(int n1, const WaveFunction& w, bool with_y) {
    const int n2 = w.dimension();
    auto params = parameters_of(*w.context(), n2);
    for (const auto& p : params)
        if (p.name.size() > 1 && (p.name[0] == 'x' || p.name[0] == 'q') &&
            std::all_of(p.name.begin() + 1, p.name.end(), ::isdigit))
            throw ContextError("wave function variable '" + p.name + "' clashes with source coordinates");
    std::vector<Variable> vars;
    for (int a = 1; a <= n1; ++a)
        vars.push_back({indexed("x", a), false});
    if (with_y)
        for (int i = 1; i <= n2; ++i)
            vars.push_back({indexed("y", i), false});
    for (const auto& p : params)
        vars.push_back(p);
    return Context::make(std::move(vars));
}

struct GrlexOrder {
    bool operator()(const Monomial& a, const Monomial& b) const noexcept { return grlex_greater(a, b); }
};

// sum_beta e_beta(x) D^beta(a)(phi(x)), grouped by y-monomial so that every
// power of phi is formed once.
BiSeries substitute_sum(const Symbol& sym, const std::map<MultiIndex, BiSeries>& table, const Transport& tr,
                        const ContextPtr& wctx, const ContextPtr& xctx, const std::vector<BiSeries>& phi) {
    const Grading& ga = phi.front().grading();
    // parameter index in wctx -> index in xctx
    std::vector<std::optional<std::size_t>> param(wctx->size());
    for (std::size_t v = 0; v < wctx->size(); ++v)
        if (std::find(tr.y_index.begin(), tr.y_index.end(), v) == tr.y_index.end())
            param[v] = xctx->require((*wctx)[v].name);

    std::map<Monomial, BiSeries, GrlexOrder> grouped;
    for (const auto& [beta, e] : sym.coeffs) {
        std::map<Monomial, std::map<BiSeries::Key, std::vector<Poly::Term>>, GrlexOrder> parts;
        for (const auto& [key, p] : table.at(beta).terms()) {
            for (const auto& [m, c] : p.terms()) {
                Monomial ys, rest;
                for (std::size_t v = 0; v < wctx->size(); ++v) {
                    unsigned x = m.exponent(v);
                    if (x == 0)
                        continue;
                    if (param[v])
                        rest = rest.with_exponent(*param[v], x);
                    else
                        ys = ys.with_exponent(v, x);
                }
                parts[ys][key].emplace_back(rest, c);
            }
        }
        for (auto& [ys, by_key] : parts) {
            BiSeries t(xctx, ga);
            for (auto& [key, terms] : by_key)
                t += BiSeries::term(key.first, key.second, Poly::from_terms(xctx, std::move(terms)), ga);
            auto it = grouped.try_emplace(ys, BiSeries(xctx, ga)).first;
            it->second += e * t;
        }
    }

    std::vector<std::vector<BiSeries>> powers(phi.size());
    auto power = [&](std::size_t i, unsigned k) -> const BiSeries& {
        auto& cache = powers[i];
        if (cache.empty())
            cache.push_back(BiSeries::one(xctx, ga));
        while (cache.size() <= k)
            cache.push_back(cache.back() * phi[i]);
        return cache[k];
    };
    BiSeries out(xctx, ga);
    for (const auto& [ys, c] : grouped) {
        BiSeries term = c;
        for (std::size_t i = 0; i < tr.y_index.size() && !term.is_zero(); ++i)
            if (unsigned k = ys.exponent(tr.y_index[i]))
                term = term * power(i, k);
        out += term;
    }
    return out;
}

} // namespace

PulledBack quantum_pullback(const GenFun& s, const WaveFunction& w) {
    check_compatible(s, w);
    const Truncation& t = w.truncation();
    const Grading ga = t.amplitude(), gp = t.phase();
    const int n1 = s.source_dim(), n2 = s.target_dim();
    ContextPtr xctx = result_context(n1, w, false);

    Decomposition dec = decompose(s);
    Symbol sym = exp_symbol(dec.higher, xctx);
    BiSeries s0 = detail::embed(dec.constant, xctx);

    std::map<std::string, BiSeries> at_phi;
    std::vector<BiSeries> phi_a;
    for (int i = 0; i < n2; ++i) {
        BiSeries phi = detail::embed(dec.map[static_cast<std::size_t>(i)], xctx);
        phi_a.push_back(phi.reframe(ga));
        at_phi.emplace(indexed("y", i + 1), std::move(phi));
    }
    auto images = detail::images_for(*w.context(), xctx, gp, at_phi);

    PulledBack out(xctx, t);
    for (const auto& term : w.terms()) {
        Transport tr(w, term);
        BiSeries result = substitute_sum(sym, derivative_table(sym, tr, term.amplitude), tr, w.context(), xctx, phi_a);
        BiSeries total_phase = s0 + evaluate(term.phase, images);
        BiSeries regular = total_phase.filter([](int m, int) { return m == 0; });
        BiSeries graded = total_phase.filter([](int m, int) { return m > 0; });
        if (!graded.is_zero())
            result = result * bs_exp(graded.times_i_over_hbar());
        out.add_term(std::move(result), std::move(regular));
    }
    return out;
}

OscillatorySum apply_higher_part(const GenFun& s, const WaveFunction& w) {
    check_compatible(s, w);
    const Truncation& t = w.truncation();
    ContextPtr xctx = result_context(s.source_dim(), w, false);
    ContextPtr wctx = result_context(s.source_dim(), w, true);
    Symbol sym = exp_symbol(decompose(s).higher, xctx);

    OscillatorySum out(wctx, t);
    for (const auto& term : w.terms()) {
        Transport tr(w, term);
        BiSeries sum(wctx, t.amplitude());
        for (const auto& [beta, d] : derivative_table(sym, tr, term.amplitude))
            if (auto it = sym.coeffs.find(beta); it != sym.coeffs.end())
                sum += detail::embed(it->second, wctx) * detail::embed(d, wctx);
        out.add_term(std::move(sum), detail::embed(term.phase, wctx));
    }
    return out;
}

BiSeries exponent_extract(const WaveTerm& t) {
    return t.phase + bs_log(t.amplitude).times_hbar_over_i();
}

BiSeries exponent_extract(const PulledBack& p) {
    if (p.terms().size() != 1)
        throw ValidationError("exponent extraction needs exactly one term, got " + std::to_string(p.terms().size()));
    return exponent_extract(p.terms().front());
}

// ------------------------------------------------------------- composition

GenFun compose(const GenFun& s_phi, const GenFun& s_psi, MomentumOverflow mode, std::optional<int> k_out) {
    if (s_phi.target_dim() != s_psi.source_dim())
        throw ValidationError("cannot compose: first morphism targets dimension " +
                              std::to_string(s_phi.target_dim()) + ", second starts from " +
                              std::to_string(s_psi.source_dim()));
    if (!(s_phi.truncation().phase() == s_psi.truncation().phase()))
        throw TruncationError("cannot compose generating functions with different truncations");
    const int n1 = s_phi.source_dim(), n2 = s_phi.target_dim(), n3 = s_psi.target_dim();
    const Truncation& t = s_phi.truncation();

    // e^{(i/h) S_psi(y, r)} with r as formal parameters; lambda-graded parts
    // of S_psi move into the amplitude.
    std::vector<std::string> names;
    std::map<std::string, std::string> renames;
    for (int i = 1; i <= n2; ++i) {
        names.push_back(indexed("y", i));
        renames[indexed("x", i)] = indexed("y", i);
    }
    for (int i = 1; i <= n3; ++i) {
        names.push_back(indexed("r", i));
        renames[indexed("q", i)] = indexed("r", i);
    }
    ContextPtr yctx = Context::make(names);
    BiSeries psi = detail::embed(s_psi.series(), yctx, renames);
    BiSeries graded = psi.filter([](int m, int) { return m > 0; });
    BiSeries amp = graded.is_zero() ? BiSeries::one(yctx, t.amplitude()) : bs_exp(graded.times_i_over_hbar());
    WaveFunction w(yctx, n2, t);
    w.add_term(std::move(amp), psi.filter([](int m, int) { return m == 0; }));

    BiSeries f = exponent_extract(quantum_pullback(s_phi, w));
    if (auto lo = f.min_hbar(); lo && *lo < 0) {
        for (const auto& [k, p] : f.terms())
            if (k.second < 0)
                throw CompositionError("composed exponent is not h-regular at (l^" + std::to_string(k.first) +
                                       ", h^" + std::to_string(k.second) + "): " + p.str());
    }

    std::map<std::string, std::string> back;
    for (int i = 1; i <= n3; ++i)
        back[indexed("r", i)] = indexed("q", i);
    ContextPtr gctx = genfun_context(n1, n3);
    BiSeries composed = detail::embed(f, gctx, back);

    Truncation out_t = t;
    out_t.K = k_out.value_or(t.K);
    std::vector<std::size_t> qs;
    for (int i = 0; i < n3; ++i)
        qs.push_back(static_cast<std::size_t>(n1 + i));
    int degree = -1;
    for (const auto& [k, p] : composed.terms())
        degree = std::max(degree, p.degree_in(qs));
    if (degree > out_t.K) {
        if (mode == MomentumOverflow::strict)
            throw TruncationError("composed generating function has momentum degree " + std::to_string(degree) +
                                  " > K=" + std::to_string(out_t.K));
        composed = composed.map(
            [&](const Poly& p) {
                return p.filter([&](const Monomial& m) {
                    unsigned d = 0;
                    for (auto q : qs)
                        d += m.exponent(q);
                    return static_cast<int>(d) <= out_t.K;
                });
            },
            gctx);
    }
    return GenFun::from_graded(n1, n3, out_t, composed);
}

// ------------------------------------------------------ linear coordinates

Matrix identity_matrix(std::size_t n) {
    Matrix a(n, std::vector<GaussRat>(n, GaussRat(0)));
    for (std::size_t i = 0; i < n; ++i)
        a[i][i] = GaussRat(1);
    return a;
}

Matrix inverse(const Matrix& a) {
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n)
            throw MatrixError("matrix must be square");
    Matrix work = a;
    Matrix inv = identity_matrix(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && work[pivot][col].is_zero())
            ++pivot;
        if (pivot == n)
            throw MatrixError("matrix is singular");
        std::swap(work[pivot], work[col]);
        std::swap(inv[pivot], inv[col]);
        GaussRat scale = work[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            work[col][j] *= scale;
            inv[col][j] *= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || work[r][col].is_zero())
                continue;
            GaussRat f = work[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                work[r][j] -= f * work[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

GenFun linear_change(const GenFun& s, const Matrix& a) {
    const int n1 = s.source_dim(), n2 = s.target_dim();
    if (a.size() != static_cast<std::size_t>(n2))
        throw MatrixError("matrix size must equal the target dimension");
    Matrix inv = inverse(a);
    const Grading& g = s.series().grading();
    const ContextPtr& ctx = s.context();
    std::map<std::string, BiSeries> over;
    for (int i = 0; i < n2; ++i) {
        Poly img(ctx);
        for (int j = 0; j < n2; ++j)
            img += Poly::variable(ctx, static_cast<std::size_t>(n1 + j)) *
                   inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        over.emplace(indexed("q", i + 1), BiSeries::constant(img, g));
    }
    return GenFun::from_graded(n1, n2, s.truncation(), evaluate(s.series(), detail::images_for(*ctx, ctx, g, over)));
}

WaveFunction linear_change(const WaveFunction& w, const Matrix& a) {
    const int n = w.dimension();
    if (a.size() != static_cast<std::size_t>(n))
        throw MatrixError("matrix size must equal the wave function dimension");
    inverse(a); // rejects singular changes
    const ContextPtr& ctx = w.context();
    auto images = [&](const Grading& g) {
        std::map<std::string, BiSeries> over;
        for (int i = 0; i < n; ++i) {
            Poly img(ctx);
            for (int j = 0; j < n; ++j)
                img += Poly::variable(ctx, indexed("y", j + 1)) *
                       a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            over.emplace(indexed("y", i + 1), BiSeries::constant(img, g));
        }
        return detail::images_for(*ctx, ctx, g, over);
    };
    auto ia = images(w.truncation().amplitude());
    auto ip = images(w.truncation().phase());
    WaveFunction out(ctx, n, w.truncation());
    for (const auto& t : w.terms())
        out.add_term(evaluate(t.amplitude, ia), evaluate(t.phase, ip));
    return out;
}

} // namespace microformal
