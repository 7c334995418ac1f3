#pragma once

// Expression syntax for polynomials and series:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] INT)?
//   primary := NUMBER | NAME | '(' expr ')'
//   NUMBER  := INT ('/' INT)? 'i'?  |  'i'
//
// `h` is hbar and `l` is lambda. A trailing `i` on a number makes it
// imaginary, so `1/2i` is i/2.

#include <memory>
#include <string>
#include <vector>

#include "microformal/biseries.hpp"

namespace microformal {

struct Expr {
    enum class Kind { number, name, neg, add, sub, mul, pow };

    Kind kind;
    GaussRat value;          // number
    std::string name;        // name
    int exponent = 0;        // pow
    std::size_t column = 0;  // 1-based start of the node
    std::vector<std::shared_ptr<const Expr>> args;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Throws ParseError carrying the 1-based column of the offending character.
ExprPtr parse_expression(const std::string& text);

struct SeriesOptions {
    bool allow_lambda = false;
    bool allow_negative_hbar = false;
};

// Evaluates e in ctx. Names other than h, l must be variables of ctx.
BiSeries to_series(const ExprPtr& e, const ContextPtr& ctx, const Grading& g, SeriesOptions opts = {});
// Rejects h and l.
Poly to_poly(const ExprPtr& e, const ContextPtr& ctx);

inline BiSeries parse_series(const std::string& text, const ContextPtr& ctx, const Grading& g,
                             SeriesOptions opts = {}) {
    return to_series(parse_expression(text), ctx, g, opts);
}
inline Poly parse_poly(const std::string& text, const ContextPtr& ctx) {
    return to_poly(parse_expression(text), ctx);
}

} // namespace microformal
