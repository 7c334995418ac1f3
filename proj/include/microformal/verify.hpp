#pragma once

// Oracle checks: independent computations of one quantity compared exactly.
// Each check is a pure function of (seed, sizes, truncation); with
// mutate = true it runs its negative control, which must fail.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "microformal/quantum.hpp"

namespace microformal {

struct Verdict {
    std::string name;
    bool passed = false;
    std::string witness; // empty iff passed
    std::uint64_t seed = 0;

    // PASS|FAIL <name> seed=<n> [witness=<expr>]
    std::string line() const;
};

struct Sizes {
    int max_source = 2; // n1, and n3 for compositions
    int max_target = 2; // n2
    int max_degree = 3; // polynomial degree of functions and of phi
    int max_momentum = 4; // q-degree of S+ terms, further capped by K
};

// Seeded generator of small random instances. Coefficients are a/b with
// 1 <= |a|, b <= 9.
class InstanceGenerator {
  public:
    explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t below(std::uint64_t n); // uniform in [0, n)
    int between(int lo, int hi);          // uniform in [lo, hi]
    bool coin(int num, int den);          // true with probability num/den
    GaussRat coefficient();

    // Random polynomial in the listed variables of ctx: `terms` monomials of
    // total degree in [lo, hi].
    Poly poly(const ContextPtr& ctx, const std::vector<std::size_t>& vars, int terms, int lo, int hi);

    // S = S0 + phi.q + S+, lambda-free, q-degree <= t.K. With hbar set, one
    // hbar-term may be added.
    GenFun genfun(int n1, int n2, const Truncation& t, const Sizes& sizes, bool hbar);
    // S+ = 0.
    GenFun ordinary_map(int n1, int n2, const Truncation& t, const Sizes& sizes);
    // Function of y1..yn, degree 2..max_degree, always depending on y1.
    Poly function(int n, const Sizes& sizes);
    // One term: random amplitude (possibly with hbar) and random phase.
    WaveFunction wave(int n, const Truncation& t, const Sizes& sizes);
    // Random invertible matrix with small rational entries.
    Matrix invertible(int n);

  private:
    std::mt19937_64 rng_;
};

// First bigrade where a and b differ, rendered as the difference term a - b.
// Empty when a == b.
std::string first_difference(const BiSeries& a, const BiSeries& b);

// h-regularity of the extracted exponent of the pulled-back pure phase
// e^{(i/h) g}, and agreement of its h^0 part with the classical pullback.
// The mutation perturbs one second-order coefficient on the classical side.
Verdict check_classical_limit(std::uint64_t seed, const Sizes& sizes, const Truncation& t, bool mutate = false);
Verdict classical_limit_instance(const GenFun& s, const Poly& g, std::uint64_t seed, bool mutate = false);

// T_g(u v) = T_g(u) T_g(v) and T_g(1) = 1 for T_g the Gateaux derivative of
// the classical pullback. The mutation compares against T_g(u) + T_g(v).
Verdict check_derivative_homomorphism(std::uint64_t seed, const Sizes& sizes, const Truncation& t,
                                      bool mutate = false);

// Pullback along compose(S_phi, S_psi) equals the sequential pullback, on ten
// wave functions, and composition of three morphisms is associative. The
// mutation adds lambda to the composed S0.
Verdict check_composition_coherence(std::uint64_t seed, const Sizes& sizes, const Truncation& t,
                                    bool mutate = false);

// quantum_pullback(S, w) = quantum_pullback(linear_change(S, A), w o A). The
// mutation adds lambda to the transformed S0.
Verdict check_linear_covariance(std::uint64_t seed, const Sizes& sizes, const Truncation& t, bool mutate = false);
Verdict linear_covariance_instance(const GenFun& s, const WaveFunction& w, const Matrix& a, std::uint64_t seed,
                                   bool mutate = false);

// All four checks for every seed in [seed, seed + cases).
std::vector<Verdict> run_all_checks(std::uint64_t seed, int cases, const Sizes& sizes, const Truncation& t,
                                    bool mutate = false);

} // namespace microformal
