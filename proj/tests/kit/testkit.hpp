#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <string>

#include "microformal/biseries.hpp"
#include "microformal/parse.hpp"
#include "microformal/verify.hpp"

namespace mftest {

using namespace microformal;

// Parses an expected value (l and h^-k allowed) into the context and grading
// of `like`.
inline BiSeries expected(const std::string& text, const BiSeries& like) {
    SeriesOptions opts;
    opts.allow_lambda = true;
    opts.allow_negative_hbar = true;
    return parse_series(text, like.context(), like.grading(), opts);
}

// Random series over ctx with terms in the staircase of g and lambda-order
// at least min_m.
BiSeries random_series(InstanceGenerator& gen, const ContextPtr& ctx, const Grading& g, int min_m, int terms,
                       int max_degree);

struct PropertyRun {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string witness; // first failure
};

// Each runs `cases` random instances drawn from seed.
PropertyRun exp_log_roundtrip(std::uint64_t seed, int cases);
PropertyRun truncation_congruence(std::uint64_t seed, int cases);
PropertyRun leibniz_rule(std::uint64_t seed, int cases);
PropertyRun substitution_homomorphism(std::uint64_t seed, int cases);

} // namespace mftest
