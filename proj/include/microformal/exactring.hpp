#pragma once

// Exact coefficient field Q(i) and sparse multivariate polynomials over it.
//
// Polynomials live in a Context: an ordered list of named variables, some of
// which may be nilpotent (square to zero). Terms are kept in descending
// graded-lexicographic order with variable 0 as the most significant, so
// equal polynomials always print identically.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace microformal {

class GaussRat {
  public:
    GaussRat() = default;
    GaussRat(long value) : re_(value) {} // NOLINT(google-explicit-constructor)
    explicit GaussRat(mpq_class re, mpq_class im = 0);

    static GaussRat i() { return GaussRat(0, 1); }
    // num/den reduced to canonical form; den must be nonzero.
    static GaussRat fraction(long num, long den);

    const mpq_class& re() const noexcept { return re_; }
    const mpq_class& im() const noexcept { return im_; }

    bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const noexcept { return sgn(im_) == 0; }
    bool is_one() const noexcept { return re_ == 1 && sgn(im_) == 0; }

    GaussRat conj() const { return GaussRat(re_, -im_); }
    GaussRat inverse() const;

    GaussRat& operator+=(const GaussRat& o);
    GaussRat& operator-=(const GaussRat& o);
    GaussRat& operator*=(const GaussRat& o);
    GaussRat& operator/=(const GaussRat& o) { return *this *= o.inverse(); }

    friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
    friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
    friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
    friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
    GaussRat operator-() const { return GaussRat(-re_, -im_); }

    friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    // "3/2", "-1/2i", "i", "(3/2 + 1/2i)".
    std::string str() const;

  private:
    mpq_class re_;
    mpq_class im_;
};

struct Variable {
    std::string name;
    bool nilpotent = false; // v^2 = 0
};

class Context;
using ContextPtr = std::shared_ptr<const Context>;

class Context {
  public:
    static constexpr std::size_t kMaxVariables = 16;

    static ContextPtr make(std::vector<Variable> variables);
    static ContextPtr make(const std::vector<std::string>& names);

    std::size_t size() const noexcept { return vars_.size(); }
    const Variable& operator[](std::size_t i) const { return vars_[i]; }
    const std::vector<Variable>& variables() const noexcept { return vars_; }
    std::optional<std::size_t> index_of(const std::string& name) const;
    // Throws ContextError when absent.
    std::size_t require(const std::string& name) const;
    const std::vector<std::size_t>& nilpotent_indices() const noexcept { return nilpotent_; }

    bool same_as(const Context& other) const;
    std::string str() const;

  private:
    explicit Context(std::vector<Variable> vars);

    std::vector<Variable> vars_;
    std::vector<std::size_t> nilpotent_;
};

bool same_context(const ContextPtr& a, const ContextPtr& b);

// Exponent vector packed eight bits per variable, variable 0 in the most
// significant byte of the first word. Ordered graded-lexicographically.
class Monomial {
  public:
    static constexpr unsigned kMaxExponent = 255;

    Monomial() = default;

    unsigned exponent(std::size_t var) const noexcept;
    unsigned degree() const noexcept { return degree_; }
    bool is_one() const noexcept { return degree_ == 0; }

    Monomial with_exponent(std::size_t var, unsigned e) const;
    // Throws TruncationError if any exponent would exceed kMaxExponent.
    friend Monomial operator*(const Monomial& a, const Monomial& b);

    friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
        return a.degree_ == b.degree_ && a.words_ == b.words_;
    }
    friend bool operator!=(const Monomial& a, const Monomial& b) noexcept { return !(a == b); }
    // Graded lex: true when a sorts before b in canonical (descending) order.
    friend bool grlex_greater(const Monomial& a, const Monomial& b) noexcept;

    std::size_t hash() const noexcept;
    std::string str(const Context& ctx) const;

  private:
    std::array<std::uint64_t, 2> words_{};
    std::uint16_t degree_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

class Poly {
  public:
    using Term = std::pair<Monomial, GaussRat>;

    explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static Poly constant(ContextPtr ctx, const GaussRat& c);
    static Poly variable(ContextPtr ctx, const std::string& name);
    static Poly variable(ContextPtr ctx, std::size_t index);
    // Accepts terms in any order; combines duplicates, drops zeros and
    // monomials killed by nilpotent variables.
    static Poly from_terms(ContextPtr ctx, std::vector<Term> terms);

    const ContextPtr& context() const noexcept { return ctx_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    // Coefficient of the empty monomial.
    GaussRat constant_term() const;
    GaussRat coefficient(const Monomial& m) const;
    // Total degree; -1 for the zero polynomial.
    int degree() const noexcept;
    // Degree in the given subset of variables; -1 for zero.
    int degree_in(const std::vector<std::size_t>& vars) const noexcept;
    bool uses_variable(std::size_t var) const noexcept;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const GaussRat& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const GaussRat& c) { return a *= c; }
    friend Poly operator*(const GaussRat& c, Poly a) { return a *= c; }
    Poly operator-() const;

    // Same context and identical term lists.
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Keeps only the terms for which pred returns true.
    Poly filter(const std::function<bool(const Monomial&)>& pred) const;

    std::string str() const;

  private:
    ContextPtr ctx_;
    std::vector<Term> terms_; // descending grlex, nonzero coefficients
};

Poly partial_derivative(const Poly& p, std::size_t var);
Poly partial_derivative(const Poly& p, const std::string& var);
Poly pow(const Poly& p, unsigned e);

// Ring homomorphism sending each listed source variable to a polynomial in
// target. Every variable that actually occurs in p must have an image.
Poly substitute(const Poly& p, const ContextPtr& target, const std::map<std::string, Poly>& images);
// Sends variables to same-named variables of target, or through renames.
Poly embed(const Poly& p, const ContextPtr& target, const std::map<std::string, std::string>& renames = {});

// Shared rendering of one term: returns {negative, body}. prefix factors come
// before the coefficient (e.g. "l^2", "h^-1"), the monomial after it.
std::pair<bool, std::string> format_term(const std::vector<std::string>& prefix, const GaussRat& coeff,
                                         const std::string& monomial);
void append_term(std::string& out, bool first, const std::pair<bool, std::string>& term);

} // namespace microformal
