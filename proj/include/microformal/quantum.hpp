#pragma once

// Oscillatory wave functions and the quantum pullback
//
//   (Phi^* w)(x) = e^{(i/h) S0(x)} [ e^{(i/h) S+(x, (h/i) d/dy)} w(y) ]_{y = phi(x)}
//
// computed by amplitude transport: a derivative acting on A e^{(i/h) b}
// gives (dA + (i/h) A db) e^{(i/h) b}, so the operator never leaves the
// bigraded series ring.

#include <string>
#include <vector>

#include "microformal/genfun.hpp"

namespace microformal {

// amplitude * e^{(i/h) phase}. The phase is lambda-free and hbar-regular.
struct WaveTerm {
    BiSeries amplitude; // amplitude grading
    BiSeries phase;     // phase grading, m = 0, j >= 0
};

// Shared representation of a finite sum of wave terms over one context.
class OscillatorySum {
  public:
    OscillatorySum(ContextPtr ctx, Truncation t) : ctx_(std::move(ctx)), trunc_(t) {}

    const ContextPtr& context() const noexcept { return ctx_; }
    const Truncation& truncation() const noexcept { return trunc_; }
    const std::vector<WaveTerm>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    // Validates gradings, context and phase invariants.
    void add_term(BiSeries amplitude, BiSeries phase);

  protected:
    ContextPtr ctx_;
    Truncation trunc_;
    std::vector<WaveTerm> terms_;
};

// Wave function on the target manifold: variables y1..yn plus parameters.
class WaveFunction : public OscillatorySum {
  public:
    WaveFunction(ContextPtr ctx, int dim, Truncation t);

    // e^{(i/h) g}
    static WaveFunction pure_phase(const Poly& g, int dim, const Truncation& t);

    int dimension() const noexcept { return dim_; }

    WaveFunction& operator+=(const WaveFunction& o);
    // Multiplies every amplitude by a series with constant coefficients.
    WaveFunction scaled(const BiSeries& c) const;

  private:
    int dim_;
};

// Result of a pullback: variables x1..xn plus parameters.
class PulledBack : public OscillatorySum {
  public:
    using OscillatorySum::OscillatorySum;
};

// Renames x1..xn to y1..yn so the result can be pulled back again.
WaveFunction as_wave_function(const PulledBack& p, int dim);

PulledBack quantum_pullback(const GenFun& s, const WaveFunction& w);

// Applies e^{(i/h) S+(x, (h/i) d/dy)} to w without substituting y. The result
// lives in (x..., y..., parameters...). S+ is the higher part of s.
OscillatorySum apply_higher_part(const GenFun& s, const WaveFunction& w);

// phase + (h/i) log(amplitude) of a single-term result.
BiSeries exponent_extract(const PulledBack& p);
BiSeries exponent_extract(const WaveTerm& t);

enum class MomentumOverflow {
    truncate, // drop terms of momentum degree > K
    strict,   // throw TruncationError
};

// Generating function of Psi o Phi: Phi maps M1 -> M2 (s_phi), Psi maps
// M2 -> M3 (s_psi). The result momentum bound is k_out (defaults to the
// truncation K of s_phi).
GenFun compose(const GenFun& s_phi, const GenFun& s_psi, MomentumOverflow mode = MomentumOverflow::truncate,
               std::optional<int> k_out = std::nullopt);

using Matrix = std::vector<std::vector<GaussRat>>;

Matrix identity_matrix(std::size_t n);
// Throws MatrixError when singular or not square.
Matrix inverse(const Matrix& a);

// S'(x, q') = S(x, (A^-1)^T q') for the change y = A y'.
GenFun linear_change(const GenFun& s, const Matrix& a);
// (w o A)(y') = w(A y').
WaveFunction linear_change(const WaveFunction& w, const Matrix& a);

} // namespace microformal
