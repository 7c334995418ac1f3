#include "microformal/biseries.hpp"

#include <algorithm>

#include "microformal/errors.hpp"

namespace microformal {

std::string Grading::str() const {
    return "M=" + std::to_string(M) + " J=" + std::to_string(J) + " cap=" + std::to_string(cap);
}

std::string Truncation::str() const {
    std::string out = "M=" + std::to_string(M) + " J=" + std::to_string(J) + " K=" + std::to_string(K);
    if (D)
        out += " D=" + std::to_string(*D);
    return out;
}

namespace {

void require_compatible(const BiSeries& a, const BiSeries& b) {
    if (!(a.grading() == b.grading()))
        throw TruncationError("mismatched truncations: " + a.grading().str() + " vs " + b.grading().str());
    if (!same_context(a.context(), b.context()))
        throw ContextError("series live in different contexts " + a.context()->str() + " and " +
                           b.context()->str());
}

std::string grade_prefix(const char* symbol, int e, std::vector<std::string>& out) {
    if (e == 0)
        return {};
    std::string f = symbol;
    if (e != 1)
        f += "^" + std::to_string(e);
    out.push_back(f);
    return f;
}

} // namespace

BiSeries::BiSeries(ContextPtr ctx, Grading grading) : ctx_(std::move(ctx)), grading_(grading) {
    if (grading_.M < 0 || grading_.J < 0 || grading_.cap < 0)
        throw TruncationError("truncation bounds must be non-negative");
}

BiSeries BiSeries::one(ContextPtr ctx, const Grading& g) {
    auto p = Poly::constant(ctx, GaussRat(1));
    return constant(p, g);
}

BiSeries BiSeries::term(int m, int j, const Poly& p, const Grading& g) {
    BiSeries s(p.context(), g);
    s.add_term(m, j, p);
    s.check_degree();
    return s;
}

void BiSeries::add_term(int m, int j, Poly p) {
    if (m < 0 || j < -m)
        throw TruncationError("bigrade (" + std::to_string(m) + "," + std::to_string(j) +
                              ") violates j >= -m");
    if (!grading_.contains(m, j) || p.is_zero())
        return;
    auto [it, inserted] = terms_.try_emplace({m, j}, p);
    if (!inserted) {
        it->second += p;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

void BiSeries::check_degree() const {
    if (!grading_.degree_guard)
        return;
    for (const auto& [k, p] : terms_)
        if (p.degree() > *grading_.degree_guard)
            throw TruncationError("polynomial degree " + std::to_string(p.degree()) + " exceeds guard D=" +
                                  std::to_string(*grading_.degree_guard));
}

Poly BiSeries::coefficient(int m, int j) const {
    auto it = terms_.find({m, j});
    return it == terms_.end() ? Poly(ctx_) : it->second;
}

int BiSeries::lambda_valuation() const noexcept {
    return terms_.empty() ? grading_.M + 1 : terms_.begin()->first.first;
}

std::optional<int> BiSeries::min_hbar() const noexcept {
    std::optional<int> best;
    for (const auto& [k, p] : terms_)
        if (!best || k.second < *best)
            best = k.second;
    return best;
}

int BiSeries::degree() const noexcept {
    int d = -1;
    for (const auto& [k, p] : terms_)
        d = std::max(d, p.degree());
    return d;
}

BiSeries& BiSeries::operator+=(const BiSeries& o) {
    require_compatible(*this, o);
    for (const auto& [k, p] : o.terms_)
        add_term(k.first, k.second, p);
    return *this;
}

BiSeries& BiSeries::operator-=(const BiSeries& o) {
    require_compatible(*this, o);
    for (const auto& [k, p] : o.terms_)
        add_term(k.first, k.second, -p);
    return *this;
}

BiSeries& BiSeries::operator*=(const GaussRat& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, p] : terms_)
        p *= c;
    return *this;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
    require_compatible(a, b);
    BiSeries out(a.ctx_, a.grading_);
    const Grading& g = a.grading_;
    for (const auto& [ka, pa] : a.terms_) {
        for (const auto& [kb, pb] : b.terms_) {
            int m = ka.first + kb.first;
            int j = ka.second + kb.second;
            if (m > g.M)
                break; // b's keys are sorted by m
            if (!g.contains(m, j))
                continue;
            out.add_term(m, j, pa * pb);
        }
    }
    out.check_degree();
    return out;
}

BiSeries operator*(const BiSeries& a, const Poly& p) {
    BiSeries out(a.ctx_, a.grading_);
    for (const auto& [k, c] : a.terms_)
        out.add_term(k.first, k.second, c * p);
    out.check_degree();
    return out;
}

BiSeries BiSeries::operator-() const {
    BiSeries s = *this;
    for (auto& [k, p] : s.terms_)
        p = -p;
    return s;
}

bool operator==(const BiSeries& a, const BiSeries& b) {
    return a.grading_ == b.grading_ && same_context(a.ctx_, b.ctx_) && a.terms_ == b.terms_;
}

BiSeries BiSeries::shifted(int dm, int dj) const {
    Grading g = grading_.with_cap(grading_.cap + dm + dj);
    if (g.cap < 0)
        throw TruncationError("shift leaves no room in the truncation");
    BiSeries out(ctx_, g);
    for (const auto& [k, p] : terms_)
        out.add_term(k.first + dm, k.second + dj, p);
    return out;
}

BiSeries BiSeries::times_i_over_hbar() const { return shifted(0, -1) * GaussRat::i(); }

BiSeries BiSeries::times_hbar_over_i() const { return shifted(0, 1) * -GaussRat::i(); }

BiSeries BiSeries::reframe(const Grading& g) const {
    BiSeries out(ctx_, g);
    for (const auto& [k, p] : terms_)
        out.add_term(k.first, k.second, p);
    out.check_degree();
    return out;
}

BiSeries BiSeries::filter(const std::function<bool(int, int)>& keep) const {
    BiSeries out(ctx_, grading_);
    for (const auto& [k, p] : terms_)
        if (keep(k.first, k.second))
            out.terms_.emplace(k, p);
    return out;
}

BiSeries BiSeries::map(const std::function<Poly(const Poly&)>& f, ContextPtr ctx) const {
    BiSeries out(std::move(ctx), grading_);
    for (const auto& [k, p] : terms_) {
        Poly q = f(p);
        if (!same_context(q.context(), out.ctx_))
            throw ContextError("mapped coefficient left the target context");
        out.add_term(k.first, k.second, std::move(q));
    }
    out.check_degree();
    return out;
}

namespace {

std::string render(const BiSeries& s, bool box_only) {
    std::string out;
    bool first = true;
    for (const auto& [k, p] : s.terms()) {
        if (box_only && k.second > s.grading().J)
            continue;
        std::vector<std::string> prefix;
        grade_prefix("l", k.first, prefix);
        grade_prefix("h", k.second, prefix);
        for (const auto& [mono, c] : p.terms()) {
            append_term(out, first, format_term(prefix, c, mono.str(*p.context())));
            first = false;
        }
    }
    return first ? "0" : out;
}

} // namespace

std::string BiSeries::str() const { return render(*this, true); }

std::string BiSeries::str_all() const { return render(*this, false); }

BiSeries partial_derivative(const BiSeries& s, std::size_t var) {
    return s.map([var](const Poly& p) { return partial_derivative(p, var); }, s.context());
}

BiSeries bs_exp(const BiSeries& a) {
    if (a.lambda_valuation() < 1)
        throw ValuationError("exp needs a series of lambda-valuation >= 1");
    BiSeries sum = BiSeries::one(a.context(), a.grading());
    BiSeries term = sum;
    for (int k = 1; k <= a.grading().M; ++k) {
        term = term * a * GaussRat::fraction(1, k);
        if (term.is_zero())
            break;
        sum += term;
    }
    return sum;
}

BiSeries bs_log(const BiSeries& a) {
    BiSeries x = a - BiSeries::one(a.context(), a.grading());
    if (x.lambda_valuation() < 1)
        throw ValuationError("log needs 1 + X with X of lambda-valuation >= 1");
    BiSeries sum(a.context(), a.grading());
    BiSeries power = x;
    for (int p = 1; p <= a.grading().M && !power.is_zero(); ++p) {
        sum += power * GaussRat::fraction(p % 2 ? 1 : -1, p);
        power = power * x;
    }
    return sum;
}

BiSeries pow(const BiSeries& a, unsigned e) {
    BiSeries result = BiSeries::one(a.context(), a.grading());
    BiSeries base = a;
    while (e) {
        if (e & 1U)
            result = result * base;
        e >>= 1U;
        if (e)
            base = base * base;
    }
    return result;
}

BiSeries evaluate(const BiSeries& s, const std::vector<std::optional<BiSeries>>& images) {
    const Context& src = *s.context();
    if (images.size() != src.size())
        throw ContextError("evaluate needs one image slot per variable of " + src.str());
    const BiSeries* proto = nullptr;
    for (const auto& img : images) {
        if (!img)
            continue;
        if (!proto)
            proto = &*img;
        else if (!(img->grading() == proto->grading()) || !same_context(img->context(), proto->context()))
            throw TruncationError("evaluate images must share context and truncation");
    }
    for (std::size_t v = 0; v < src.size(); ++v) {
        if (images[v])
            continue;
        for (const auto& [k, p] : s.terms())
            if (p.uses_variable(v))
                throw ContextError("no image for variable '" + src[v].name + "'");
    }
    if (!proto)
        throw ContextError("evaluate needs at least one image to fix the target context");

    const Grading& g = proto->grading();
    const ContextPtr& target = proto->context();
    std::vector<std::vector<BiSeries>> powers(src.size());
    auto power = [&](std::size_t v, unsigned e) -> const BiSeries& {
        auto& cache = powers[v];
        if (cache.empty())
            cache.push_back(BiSeries::one(target, g));
        while (cache.size() <= e)
            cache.push_back(cache.back() * *images[v]);
        return cache[e];
    };

    BiSeries out(target, g);
    for (const auto& [k, p] : s.terms()) {
        auto [m, j] = k;
        // Region of the inner sum so that the shift by (m, j) lands inside g.
        Grading inner = g;
        inner.M = g.M - m;
        inner.cap = g.cap - m - j;
        if (inner.M < 0 || inner.cap < 0)
            continue;
        BiSeries sum(target, inner);
        for (const auto& [mono, c] : p.terms()) {
            BiSeries prod = BiSeries::constant(Poly::constant(target, c), inner);
            for (std::size_t v = 0; v < src.size() && !prod.is_zero(); ++v)
                if (unsigned e = mono.exponent(v))
                    prod = prod * power(v, e).reframe(inner);
            sum += prod;
        }
        for (const auto& [ik, ip] : sum.terms())
            out += BiSeries::term(ik.first + m, ik.second + j, ip, g);
    }
    return out;
}

} // namespace microformal
