#pragma once

// Truncated double series in a coupling grade lambda and in hbar,
//
//     sum  lambda^m hbar^j  c_{m,j},     c_{m,j} a Poly,
//
// Laurent in hbar with the pole depth tied to the lambda order: j >= -m.
//
// A series keeps every bigrade in the staircase
//
//     0 <= m <= M,   j >= -m,   j + m <= cap,
//
// and the set of bigrades above the staircase is an ideal of the ring, so
// products are exact on everything that is stored. The reported box is
// j <= J; terms between the box and the staircase are guard terms that keep
// the box exact through products with hbar poles. Amplitudes use
// cap = J + M; phases and generating functions enter every formula through
// (i/hbar) * phase and therefore carry one more level, cap = J + M + 1.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "microformal/exactring.hpp"

namespace microformal {

struct Grading {
    int M = 0;   // max lambda order
    int J = 0;   // reported hbar order
    int cap = 0; // max j + m kept
    std::optional<int> degree_guard;

    bool contains(int m, int j) const noexcept { return m >= 0 && m <= M && j >= -m && j + m <= cap; }
    Grading with_cap(int c) const {
        Grading g = *this;
        g.cap = c;
        return g;
    }
    friend bool operator==(const Grading&, const Grading&) = default;
    std::string str() const;
};

struct Truncation {
    int M = 4; // lambda order
    int J = 4; // hbar order
    int K = 4; // max momentum degree of generating functions
    std::optional<int> D; // polynomial degree guard

    Grading amplitude() const { return {M, J, J + M, D}; }
    Grading phase() const { return {M, J, J + M + 1, D}; }

    friend bool operator==(const Truncation&, const Truncation&) = default;
    std::string str() const;
};

class BiSeries {
  public:
    using Key = std::pair<int, int>; // (m, j)

    BiSeries(ContextPtr ctx, Grading grading);

    static BiSeries zero(ContextPtr ctx, const Grading& g) { return BiSeries(std::move(ctx), g); }
    static BiSeries one(ContextPtr ctx, const Grading& g);
    static BiSeries constant(const Poly& p, const Grading& g) { return term(0, 0, p, g); }
    // lambda^m hbar^j p. Throws TruncationError when j < -m or m < 0;
    // bigrades above the staircase are dropped.
    static BiSeries term(int m, int j, const Poly& p, const Grading& g);

    const ContextPtr& context() const noexcept { return ctx_; }
    const Grading& grading() const noexcept { return grading_; }
    const std::map<Key, Poly>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    Poly coefficient(int m, int j) const;

    // Smallest m with a nonzero coefficient; M + 1 for the zero series.
    int lambda_valuation() const noexcept;
    // Smallest j present; nullopt for zero.
    std::optional<int> min_hbar() const noexcept;
    // Largest total degree over all coefficients; -1 for zero.
    int degree() const noexcept;

    BiSeries& operator+=(const BiSeries& o);
    BiSeries& operator-=(const BiSeries& o);
    BiSeries& operator*=(const GaussRat& c);
    friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
    friend BiSeries operator-(BiSeries a, const BiSeries& b) { return a -= b; }
    friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
    friend BiSeries operator*(BiSeries a, const GaussRat& c) { return a *= c; }
    friend BiSeries operator*(const GaussRat& c, BiSeries a) { return a *= c; }
    // Coefficient-wise product with a polynomial of the same context.
    friend BiSeries operator*(const BiSeries& a, const Poly& p);
    BiSeries operator-() const;

    // Compares grading, context and every stored coefficient.
    friend bool operator==(const BiSeries& a, const BiSeries& b);
    friend bool operator!=(const BiSeries& a, const BiSeries& b) { return !(a == b); }

    // Multiplies by lambda^dm hbar^dj and moves the cap by dj + dm. Throws
    // TruncationError if a term would fall below j = -m.
    BiSeries shifted(int dm, int dj) const;
    // (i/hbar) * this, staying in the same (m, j + m) frame: cap - 1.
    BiSeries times_i_over_hbar() const;
    // (hbar/i) * this: cap + 1.
    BiSeries times_hbar_over_i() const;

    // Drops the bigrades outside g; context unchanged.
    BiSeries reframe(const Grading& g) const;
    BiSeries filter(const std::function<bool(int m, int j)>& keep) const;
    // Applies f to every coefficient; f must return polys in ctx.
    BiSeries map(const std::function<Poly(const Poly&)>& f, ContextPtr ctx) const;

    // Canonical rendering of the reported box (j <= J), e.g.
    // "l^2*h^-1*(3/2 + 1/2i)*x1^2". str_all includes guard terms.
    std::string str() const;
    std::string str_all() const;

  private:
    void add_term(int m, int j, Poly p);
    void check_degree() const;

    ContextPtr ctx_;
    Grading grading_;
    std::map<Key, Poly> terms_;
};

BiSeries partial_derivative(const BiSeries& s, std::size_t var);

// Requires lambda-valuation >= 1.
BiSeries bs_exp(const BiSeries& a);
// Requires a = 1 + X with X of lambda-valuation >= 1.
BiSeries bs_log(const BiSeries& a);
BiSeries pow(const BiSeries& a, unsigned e);

// Substitutes series for the variables of s's context: variable v becomes
// images[v] (nullopt images must not occur in s). Images share one context
// and one grading, which is also the grading of the result.
BiSeries evaluate(const BiSeries& s, const std::vector<std::optional<BiSeries>>& images);

} // namespace microformal
