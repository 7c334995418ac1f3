#pragma once

// Generating functions S(x, q) and the classical pullback.
//
// A GenFun stores its series in graded form: every term of momentum degree
// >= 2 carries at least one power of lambda. Generating functions read from
// user input have no lambda at all; from_series attaches exactly one lambda to
// their higher part. Composed generating functions come out graded already.

#include <string>
#include <vector>

#include "microformal/biseries.hpp"

namespace microformal {

// (x1..xn1)
ContextPtr source_context(int n1);
// (x1..xn1, q1..qn2)
ContextPtr genfun_context(int n1, int n2);
// (y1..yn2)
ContextPtr target_context(int n2);

// Variables of ctx not in the reserved families x*, y*, q* (e.g. r1, eps).
std::vector<Variable> parameters_of(const Context& ctx, int n_y);

class GenFun {
  public:
    // s lives in genfun_context(n1, n2), uses phase grading, has no lambda.
    static GenFun from_series(int n1, int n2, const Truncation& t, const BiSeries& s);
    // s is already lambda-graded.
    static GenFun from_graded(int n1, int n2, const Truncation& t, const BiSeries& s);

    int source_dim() const noexcept { return n1_; }
    int target_dim() const noexcept { return n2_; }
    const Truncation& truncation() const noexcept { return trunc_; }
    const BiSeries& series() const noexcept { return series_; }
    const ContextPtr& context() const noexcept { return series_.context(); }

    // Coefficient of q^alpha as a series in source_context(n1).
    BiSeries coefficient(const std::vector<unsigned>& alpha) const;
    // Highest momentum degree present; -1 for S = 0.
    int momentum_degree() const;
    bool is_hbar_free() const;

    friend bool operator==(const GenFun& a, const GenFun& b) {
        return a.n1_ == b.n1_ && a.n2_ == b.n2_ && a.series_ == b.series_;
    }
    std::string str() const { return series_.str(); }

  private:
    GenFun(int n1, int n2, Truncation t, BiSeries s);

    int n1_;
    int n2_;
    Truncation trunc_;
    BiSeries series_;
};

// S = constant + map^i q_i + higher, higher of momentum valuation >= 2.
struct Decomposition {
    BiSeries constant;        // over source_context
    std::vector<BiSeries> map; // over source_context
    GenFun higher;
};
Decomposition decompose(const GenFun& s);

// A generating function with only hbar^0 terms.
class ClassicalGenFun {
  public:
    explicit ClassicalGenFun(GenFun s);
    const GenFun& genfun() const noexcept { return s_; }

  private:
    GenFun s_;
};

ClassicalGenFun classical_limit(const GenFun& s);

// Evaluates S0 + phi.q + S+(x,q) + g(y) - y.q at the stationary point
// q = dg/dy(y), y = phi + dS+/dq(x, q), found by lambda-adic fixed-point
// iteration. g lives in a context whose y-variables are y1..yn2; any other
// variables are carried through as parameters. The result lives in
// (x1..xn1, parameters...) and has hbar-order 0.
BiSeries classical_pullback(const ClassicalGenFun& s, const Poly& g);

// epsilon-coefficient of classical_pullback(s, g + eps*u), eps^2 = 0.
BiSeries gateaux_derivative(const ClassicalGenFun& s, const Poly& g, const Poly& u);

} // namespace microformal
