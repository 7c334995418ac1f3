#include "microformal/parse.hpp"

#include <cctype>
#include <map>

#include "microformal/errors.hpp"

namespace microformal {

namespace {

constexpr int kMaxPower = 255;

class Parser {
  public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprPtr run() {
        skip();
        if (pos_ == s_.size())
            fail("empty expression");
        ExprPtr e = expr();
        skip();
        if (pos_ != s_.size())
            fail(std::string("unexpected '") + s_[pos_] + "'");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    static ExprPtr node(Expr::Kind k, std::size_t col, std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->column = col;
        e->args = std::move(args);
        return e;
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (peek('+') || peek('-')) {
            std::size_t col = pos_ + 1;
            Expr::Kind k = s_[pos_] == '+' ? Expr::Kind::add : Expr::Kind::sub;
            ++pos_;
            lhs = node(k, col, {lhs, term()});
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        while (peek('*')) {
            std::size_t col = pos_ + 1;
            ++pos_;
            lhs = node(Expr::Kind::mul, col, {lhs, unary()});
        }
        return lhs;
    }

    ExprPtr unary() {
        if (peek('-')) {
            std::size_t col = pos_ + 1;
            ++pos_;
            return node(Expr::Kind::neg, col, {unary()});
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (!peek('^'))
            return base;
        std::size_t col = pos_ + 1;
        ++pos_;
        skip();
        bool negative = false;
        if (pos_ < s_.size() && s_[pos_] == '-') {
            negative = true;
            ++pos_;
        }
        if (pos_ == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            fail("expected integer exponent");
        std::string digits = integer();
        if (digits.size() > 3 || std::stoi(digits) > kMaxPower)
            fail("exponent too large");
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::pow;
        e->column = col;
        e->exponent = negative ? -std::stoi(digits) : std::stoi(digits);
        e->args = {base};
        return e;
    }

    std::string integer() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        return s_.substr(start, pos_ - start);
    }

    ExprPtr primary() {
        skip();
        if (pos_ == s_.size())
            fail("unexpected end of input");
        std::size_t col = pos_ + 1;
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr inner = expr();
            if (!peek(')'))
                fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return number(col);
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                fail("malformed name");
            auto e = std::make_shared<Expr>();
            e->column = col;
            if (name == "i") {
                e->kind = Expr::Kind::number;
                e->value = GaussRat::i();
            } else {
                e->kind = Expr::Kind::name;
                e->name = name;
            }
            return e;
        }
        fail(std::string("unexpected '") + c + "'");
    }

    ExprPtr number(std::size_t col) {
        mpz_class num(integer());
        mpz_class den = 1;
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            if (pos_ == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected denominator");
            std::size_t at = pos_;
            den = mpz_class(integer());
            if (den == 0)
                throw ParseError("zero denominator", at + 1);
        }
        mpq_class q(num, den);
        q.canonicalize();
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::number;
        e->column = col;
        if (pos_ < s_.size() && s_[pos_] == 'i' &&
            (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            e->value = GaussRat(0, q);
        } else {
            e->value = GaussRat(q);
        }
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
            fail("malformed number");
        return e;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

// Untruncated value: (lambda power, hbar power) -> coefficient.
using Value = std::map<std::pair<int, int>, Poly>;

void accumulate(Value& v, std::pair<int, int> k, const Poly& p) {
    if (p.is_zero())
        return;
    auto [it, inserted] = v.try_emplace(k, p);
    if (!inserted) {
        it->second += p;
        if (it->second.is_zero())
            v.erase(it);
    }
}

Value multiply(const Value& a, const Value& b) {
    Value out;
    for (const auto& [ka, pa] : a)
        for (const auto& [kb, pb] : b)
            accumulate(out, {ka.first + kb.first, ka.second + kb.second}, pa * pb);
    return out;
}

class Evaluator {
  public:
    Evaluator(ContextPtr ctx, SeriesOptions opts) : ctx_(std::move(ctx)), opts_(opts) {}

    Value eval(const Expr& e) const {
        switch (e.kind) {
        case Expr::Kind::number:
            return scalar(Poly::constant(ctx_, e.value));
        case Expr::Kind::name:
            return name(e);
        case Expr::Kind::neg: {
            Value v = eval(*e.args[0]);
            for (auto& [k, p] : v)
                p = -p;
            return v;
        }
        case Expr::Kind::add:
        case Expr::Kind::sub: {
            Value v = eval(*e.args[0]);
            for (auto [k, p] : eval(*e.args[1]))
                accumulate(v, k, e.kind == Expr::Kind::add ? p : -p);
            return v;
        }
        case Expr::Kind::mul:
            return multiply(eval(*e.args[0]), eval(*e.args[1]));
        case Expr::Kind::pow:
            return power(e);
        }
        throw InternalError("unknown expression node");
    }

  private:
    Value scalar(const Poly& p) const {
        Value v;
        accumulate(v, {0, 0}, p);
        return v;
    }

    Value name(const Expr& e) const {
        Value v;
        if (e.name == "h") {
            v.emplace(std::make_pair(0, 1), Poly::constant(ctx_, GaussRat(1)));
        } else if (e.name == "l") {
            if (!opts_.allow_lambda)
                throw ParseError("'l' (lambda) is not allowed in input", e.column);
            v.emplace(std::make_pair(1, 0), Poly::constant(ctx_, GaussRat(1)));
        } else {
            if (!ctx_->index_of(e.name))
                throw ContextError("unknown variable '" + e.name + "' at column " + std::to_string(e.column) +
                                   " (expected one of " + ctx_->str() + ")");
            v.emplace(std::make_pair(0, 0), Poly::variable(ctx_, e.name));
        }
        return v;
    }

    Value power(const Expr& e) const {
        const Expr& base = *e.args[0];
        if (e.exponent < 0) {
            if (base.kind != Expr::Kind::name || base.name != "h")
                throw ParseError("negative exponents are only allowed on h", e.column);
            if (!opts_.allow_negative_hbar)
                throw ParseError("negative powers of h are not allowed here", e.column);
            Value v;
            v.emplace(std::make_pair(0, e.exponent), Poly::constant(ctx_, GaussRat(1)));
            return v;
        }
        Value b = eval(base);
        Value out = scalar(Poly::constant(ctx_, GaussRat(1)));
        for (int k = 0; k < e.exponent; ++k)
            out = multiply(out, b);
        return out;
    }

    ContextPtr ctx_;
    SeriesOptions opts_;
};

} // namespace

ExprPtr parse_expression(const std::string& text) { return Parser(text).run(); }

BiSeries to_series(const ExprPtr& e, const ContextPtr& ctx, const Grading& g, SeriesOptions opts) {
    BiSeries out(ctx, g);
    for (const auto& [k, p] : Evaluator(ctx, opts).eval(*e))
        out += BiSeries::term(k.first, k.second, p, g);
    return out;
}

Poly to_poly(const ExprPtr& e, const ContextPtr& ctx) {
    Value v = Evaluator(ctx, {}).eval(*e);
    Poly out(ctx);
    for (const auto& [k, p] : v) {
        if (k != std::make_pair(0, 0))
            throw ValidationError("expected a polynomial without h or l");
        out += p;
    }
    return out;
}

} // namespace microformal
