#pragma once

// Line-oriented morphism files:
//
//   # comment
//   dims 1 1
//   trunc M=2 J=2 K=2 [D=8]
//   S = x1*q1 + 1/2*q1^2
//   w: amp=1 phase=1/2*y1^2
//
// `w = amp(<expr>) phase(<expr>)` is accepted as well. Either part may be
// left out (amplitude 1, phase 0). dims and trunc must precede S and w.

#include <string>
#include <vector>

#include "microformal/quantum.hpp"

namespace microformal {

struct MorphismFile {
    int n1;
    int n2;
    Truncation trunc;
    GenFun s;
    WaveFunction w; // over y1..yn2; may have no terms
};

// Errors are ParseError (with "line N:" in the message and the column in the
// line), ContextError or ValidationError.
MorphismFile parse_morphism_file(const std::string& text);
MorphismFile load_morphism_file(const std::string& path);

// "a,b;c,d" -> 2x2. Entries are expressions without variables.
Matrix parse_matrix(const std::string& text);

// The single pure phase g of f.w, for the classical pullback.
Poly classical_input(const MorphismFile& f);

} // namespace microformal
