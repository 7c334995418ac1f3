#include "microformal/exactring.hpp"

#include <algorithm>
#include <unordered_map>

#include "microformal/errors.hpp"

namespace microformal {

// ---------------------------------------------------------------- GaussRat

GaussRat::GaussRat(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

GaussRat GaussRat::fraction(long num, long den) {
    if (den == 0)
        throw Error("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return GaussRat(q);
}

GaussRat GaussRat::inverse() const {
    if (is_zero())
        throw Error("division by zero");
    mpq_class norm = re_ * re_ + im_ * im_;
    return GaussRat(re_ / norm, -im_ / norm);
}

GaussRat& GaussRat::operator+=(const GaussRat& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0)
        im_ += o.im_;
    return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0)
        im_ -= o.im_;
    return *this;
}

GaussRat& GaussRat::operator*=(const GaussRat& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

namespace {

std::string imag_str(const mpq_class& im) {
    // im > 0 expected
    return im == 1 ? std::string("i") : im.get_str() + "i";
}

} // namespace

std::string GaussRat::str() const {
    if (sgn(im_) == 0)
        return re_.get_str();
    if (sgn(re_) == 0)
        return sgn(im_) < 0 ? "-" + imag_str(-im_) : imag_str(im_);
    std::string out = "(" + re_.get_str();
    out += sgn(im_) < 0 ? " - " + imag_str(-im_) : " + " + imag_str(im_);
    return out + ")";
}

// ----------------------------------------------------------------- Context

Context::Context(std::vector<Variable> vars) : vars_(std::move(vars)) {
    if (vars_.size() > kMaxVariables)
        throw ContextError("too many variables in context (max " + std::to_string(kMaxVariables) + ")");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (vars_[i].name == vars_[j].name)
                throw ContextError("duplicate variable '" + vars_[i].name + "'");
        if (vars_[i].nilpotent)
            nilpotent_.push_back(i);
    }
}

ContextPtr Context::make(std::vector<Variable> variables) {
    return ContextPtr(new Context(std::move(variables)));
}

ContextPtr Context::make(const std::vector<std::string>& names) {
    std::vector<Variable> vars;
    vars.reserve(names.size());
    for (const auto& n : names)
        vars.push_back({n, false});
    return make(std::move(vars));
}

std::optional<std::size_t> Context::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name)
            return i;
    return std::nullopt;
}

std::size_t Context::require(const std::string& name) const {
    if (auto i = index_of(name))
        return *i;
    throw ContextError("unknown variable '" + name + "' in context " + str());
}

bool Context::same_as(const Context& other) const {
    if (this == &other)
        return true;
    if (vars_.size() != other.vars_.size())
        return false;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name != other.vars_[i].name || vars_[i].nilpotent != other.vars_[i].nilpotent)
            return false;
    return true;
}

std::string Context::str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i)
            out += ",";
        out += vars_[i].name;
    }
    return out + ")";
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
    return a == b || (a && b && a->same_as(*b));
}

// ---------------------------------------------------------------- Monomial

namespace {

constexpr std::uint64_t kHigh = 0x8080808080808080ULL;
constexpr std::uint64_t kLow = ~kHigh;

unsigned shift_of(std::size_t var) { return 56U - 8U * static_cast<unsigned>(var % 8); }

} // namespace

unsigned Monomial::exponent(std::size_t var) const noexcept {
    return static_cast<unsigned>((words_[var / 8] >> shift_of(var)) & 0xFFU);
}

Monomial Monomial::with_exponent(std::size_t var, unsigned e) const {
    if (var >= Context::kMaxVariables)
        throw ContextError("variable index out of range");
    if (e > kMaxExponent)
        throw TruncationError("exponent overflow (max " + std::to_string(kMaxExponent) + ")");
    Monomial m = *this;
    unsigned old = exponent(var);
    std::uint64_t mask = std::uint64_t{0xFF} << shift_of(var);
    m.words_[var / 8] = (m.words_[var / 8] & ~mask) | (std::uint64_t{e} << shift_of(var));
    m.degree_ = static_cast<std::uint16_t>(m.degree_ - old + e);
    return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t w = 0; w < 2; ++w) {
        std::uint64_t x = a.words_[w], y = b.words_[w];
        std::uint64_t s = ((x & kLow) + (y & kLow)) ^ ((x ^ y) & kHigh);
        if (((x & y) | ((x | y) & ~s)) & kHigh)
            throw TruncationError("exponent overflow (max " + std::to_string(Monomial::kMaxExponent) + ")");
        m.words_[w] = s;
    }
    m.degree_ = static_cast<std::uint16_t>(a.degree_ + b.degree_);
    return m;
}

bool grlex_greater(const Monomial& a, const Monomial& b) noexcept {
    if (a.degree_ != b.degree_)
        return a.degree_ > b.degree_;
    if (a.words_[0] != b.words_[0])
        return a.words_[0] > b.words_[0];
    return a.words_[1] > b.words_[1];
}

std::size_t Monomial::hash() const noexcept {
    std::uint64_t h = words_[0] * 0x9E3779B97F4A7C15ULL;
    h ^= (words_[1] + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h ^ degree_);
}

std::string Monomial::str(const Context& ctx) const {
    std::string out;
    for (std::size_t v = 0; v < ctx.size(); ++v) {
        unsigned e = exponent(v);
        if (e == 0)
            continue;
        if (!out.empty())
            out += "*";
        out += ctx[v].name;
        if (e > 1)
            out += "^" + std::to_string(e);
    }
    return out;
}

// -------------------------------------------------------------------- Poly

namespace {

bool killed_by_nilpotent(const Context& ctx, const Monomial& m) {
    for (std::size_t v : ctx.nilpotent_indices())
        if (m.exponent(v) > 1)
            return true;
    return false;
}

void require_same(const Poly& a, const Poly& b) {
    if (!same_context(a.context(), b.context()))
        throw ContextError("polynomials live in different contexts " + a.context()->str() + " and " +
                           b.context()->str());
}

} // namespace

Poly Poly::constant(ContextPtr ctx, const GaussRat& c) {
    Poly p(std::move(ctx));
    if (!c.is_zero())
        p.terms_.emplace_back(Monomial{}, c);
    return p;
}

Poly Poly::variable(ContextPtr ctx, const std::string& name) {
    std::size_t i = ctx->require(name);
    return variable(std::move(ctx), i);
}

Poly Poly::variable(ContextPtr ctx, std::size_t index) {
    if (index >= ctx->size())
        throw ContextError("variable index out of range");
    Poly p(std::move(ctx));
    p.terms_.emplace_back(Monomial{}.with_exponent(index, 1), GaussRat(1));
    return p;
}

Poly Poly::from_terms(ContextPtr ctx, std::vector<Term> terms) {
    Poly p(std::move(ctx));
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return grlex_greater(a.first, b.first); });
    for (auto& t : terms) {
        if (t.second.is_zero() || killed_by_nilpotent(*p.ctx_, t.first))
            continue;
        if (!p.terms_.empty() && p.terms_.back().first == t.first) {
            p.terms_.back().second += t.second;
            if (p.terms_.back().second.is_zero())
                p.terms_.pop_back();
        } else {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

bool Poly::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one());
}

GaussRat Poly::constant_term() const {
    if (!terms_.empty() && terms_.back().first.is_one())
        return terms_.back().second;
    return GaussRat(0);
}

GaussRat Poly::coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return grlex_greater(t.first, key); });
    if (it != terms_.end() && it->first == m)
        return it->second;
    return GaussRat(0);
}

int Poly::degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<int>(terms_.front().first.degree());
}

int Poly::degree_in(const std::vector<std::size_t>& vars) const noexcept {
    int best = -1;
    for (const auto& t : terms_) {
        int d = 0;
        for (std::size_t v : vars)
            d += static_cast<int>(t.first.exponent(v));
        best = std::max(best, d);
    }
    return best;
}

bool Poly::uses_variable(std::size_t var) const noexcept {
    return std::any_of(terms_.begin(), terms_.end(), [var](const Term& t) { return t.first.exponent(var) > 0; });
}

namespace {

// Merge of two sorted term lists; sign = +1 or -1 applied to b.
std::vector<Poly::Term> merge_terms(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b, bool negate) {
    std::vector<Poly::Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && grlex_greater(a[i].first, b[j].first))) {
            out.push_back(a[i++]);
        } else if (i == a.size() || grlex_greater(b[j].first, a[i].first)) {
            out.emplace_back(b[j].first, negate ? -b[j].second : b[j].second);
            ++j;
        } else {
            GaussRat c = a[i].second;
            if (negate)
                c -= b[j].second;
            else
                c += b[j].second;
            if (!c.is_zero())
                out.emplace_back(a[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

Poly& Poly::operator+=(const Poly& o) {
    require_same(*this, o);
    if (o.terms_.empty())
        return *this;
    terms_ = merge_terms(terms_, o.terms_, false);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    require_same(*this, o);
    if (o.terms_.empty())
        return *this;
    terms_ = merge_terms(terms_, o.terms_, true);
    return *this;
}

Poly& Poly::operator*=(const GaussRat& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    if (c.is_one())
        return *this;
    for (auto& t : terms_)
        t.second *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    require_same(a, b);
    Poly out(a.ctx_);
    if (a.terms_.empty() || b.terms_.empty())
        return out;
    const Context& ctx = *a.ctx_;
    if (b.terms_.size() == 1 && b.terms_[0].first.is_one())
        return a * b.terms_[0].second;
    if (a.terms_.size() == 1 && a.terms_[0].first.is_one())
        return b * a.terms_[0].second;

    std::unordered_map<Monomial, GaussRat, MonomialHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m = ma * mb;
            if (killed_by_nilpotent(ctx, m))
                continue;
            auto [it, inserted] = acc.try_emplace(m, ca);
            if (inserted)
                it->second *= cb;
            else
                it->second += ca * cb;
        }
    }
    out.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (!c.is_zero())
            out.terms_.emplace_back(m, std::move(c));
    std::sort(out.terms_.begin(), out.terms_.end(),
              [](const Poly::Term& x, const Poly::Term& y) { return grlex_greater(x.first, y.first); });
    return out;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_)
        t.second = -t.second;
    return p;
}

bool operator==(const Poly& a, const Poly& b) {
    return same_context(a.ctx_, b.ctx_) && a.terms_ == b.terms_;
}

Poly Poly::filter(const std::function<bool(const Monomial&)>& pred) const {
    Poly p(ctx_);
    for (const auto& t : terms_)
        if (pred(t.first))
            p.terms_.push_back(t);
    return p;
}

std::pair<bool, std::string> format_term(const std::vector<std::string>& prefix, const GaussRat& coeff,
                                         const std::string& monomial) {
    bool negative = false;
    std::string mag;
    if (coeff.is_real()) {
        negative = sgn(coeff.re()) < 0;
        mpq_class a = abs(coeff.re());
        if (a != 1 || (prefix.empty() && monomial.empty()))
            mag = a.get_str();
    } else if (sgn(coeff.re()) == 0) {
        negative = sgn(coeff.im()) < 0;
        mag = GaussRat(0, abs(coeff.im())).str();
    } else {
        mag = coeff.str();
    }
    std::string body;
    auto add = [&body](const std::string& f) {
        if (f.empty())
            return;
        if (!body.empty())
            body += "*";
        body += f;
    };
    for (const auto& f : prefix)
        add(f);
    add(mag);
    add(monomial);
    return {negative, body};
}

void append_term(std::string& out, bool first, const std::pair<bool, std::string>& term) {
    if (first)
        out += term.first ? "-" + term.second : term.second;
    else
        out += (term.first ? " - " : " + ") + term.second;
}

std::string Poly::str() const {
    if (terms_.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        append_term(out, first, format_term({}, c, m.str(*ctx_)));
        first = false;
    }
    return out;
}

// ---------------------------------------------------------- free functions

Poly partial_derivative(const Poly& p, std::size_t var) {
    if (var >= p.context()->size())
        throw ContextError("variable index out of range");
    std::vector<Poly::Term> terms;
    for (const auto& [m, c] : p.terms()) {
        unsigned e = m.exponent(var);
        if (e == 0)
            continue;
        terms.emplace_back(m.with_exponent(var, e - 1), c * GaussRat(static_cast<long>(e)));
    }
    return Poly::from_terms(p.context(), std::move(terms));
}

Poly partial_derivative(const Poly& p, const std::string& var) {
    return partial_derivative(p, p.context()->require(var));
}

Poly pow(const Poly& p, unsigned e) {
    Poly result = Poly::constant(p.context(), GaussRat(1));
    Poly base = p;
    while (e) {
        if (e & 1U)
            result = result * base;
        e >>= 1U;
        if (e)
            base = base * base;
    }
    return result;
}

Poly substitute(const Poly& p, const ContextPtr& target, const std::map<std::string, Poly>& images) {
    const Context& src = *p.context();
    std::vector<const Poly*> image(src.size(), nullptr);
    for (const auto& [name, img] : images) {
        if (!same_context(img.context(), target))
            throw ContextError("image of '" + name + "' is not in the target context");
        if (auto i = src.index_of(name))
            image[*i] = &img;
    }
    for (std::size_t v = 0; v < src.size(); ++v)
        if (!image[v] && p.uses_variable(v))
            throw ContextError("no image for variable '" + src[v].name + "'");

    std::vector<std::vector<Poly>> powers(src.size());
    auto power = [&](std::size_t v, unsigned e) -> const Poly& {
        auto& cache = powers[v];
        if (cache.empty())
            cache.push_back(Poly::constant(target, GaussRat(1)));
        while (cache.size() <= e)
            cache.push_back(cache.back() * *image[v]);
        return cache[e];
    };

    std::unordered_map<Monomial, GaussRat, MonomialHash> acc;
    for (const auto& [m, c] : p.terms()) {
        Poly term = Poly::constant(target, c);
        for (std::size_t v = 0; v < src.size() && !term.is_zero(); ++v)
            if (unsigned e = m.exponent(v))
                term = term * power(v, e);
        for (const auto& [tm, tc] : term.terms()) {
            auto [it, inserted] = acc.try_emplace(tm, tc);
            if (!inserted)
                it->second += tc;
        }
    }
    std::vector<Poly::Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
        terms.emplace_back(m, std::move(c));
    return Poly::from_terms(target, std::move(terms));
}

Poly embed(const Poly& p, const ContextPtr& target, const std::map<std::string, std::string>& renames) {
    const Context& src = *p.context();
    std::vector<std::optional<std::size_t>> to(src.size());
    for (std::size_t v = 0; v < src.size(); ++v) {
        auto r = renames.find(src[v].name);
        to[v] = target->index_of(r == renames.end() ? src[v].name : r->second);
        if (!to[v] && p.uses_variable(v))
            throw ContextError("variable '" + src[v].name + "' has no counterpart in " + target->str());
    }
    std::vector<Poly::Term> terms;
    terms.reserve(p.terms().size());
    for (const auto& [m, c] : p.terms()) {
        Monomial out;
        for (std::size_t v = 0; v < src.size(); ++v)
            if (unsigned e = m.exponent(v))
                out = out * Monomial{}.with_exponent(*to[v], e);
        terms.emplace_back(out, c);
    }
    return Poly::from_terms(target, std::move(terms));
}

} // namespace microformal
