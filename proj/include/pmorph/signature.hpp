#pragma once

// Signature of the link obtained by closing a braid word, computed from the
// checkerboard (Goeritz) form of the standard annular closure diagram with
// the orientation correction for the shaded surface. All arithmetic is exact
// (GMP integers/rationals), so the result is the true integer signature of
// the diagram, not a floating-point estimate.

#include "pmorph/braid.hpp"

namespace pmorph {

// Signature of the closure of w. Splits into connected sub-diagrams first;
// unused strands contribute unknotted circles (signature 0). The empty word
// closes to an unlink: signature 0.
int link_signature(const BraidWord& w);

namespace detail {

// Exact signature (positive minus negative eigenvalue count) of a symmetric
// integer matrix, by rational congruence elimination with 1x1 pivots and
// hyperbolic 2x2 pivots for all-zero diagonals.
int signature_of_symmetric(const std::vector<std::vector<long long>>& m);

}  // namespace detail

}  // namespace pmorph
