#pragma once

#include <span>
#include <vector>

#include "vweb/poly.hpp"

namespace vweb {

using RatRow = std::vector<Rat>;
using RatMat = std::vector<RatRow>;

// Rank over the rationals (takes the matrix by value, eliminates in place).
int rat_rank(RatMat m);

using PolyRow = std::vector<Poly>;
using PolyMat = std::vector<PolyRow>;

// Exact division a / b in the polynomial ring; throws Error when b does
// not divide a.  Used by the fraction-free elimination below.
Poly divexact(const Poly& a, const Poly& b);

// Rank over the fraction field of the polynomial ring (generic rank),
// computed by fraction-free Bareiss elimination.
int poly_rank(PolyMat m);

// Basis of the right kernel over the fraction field, with denominators
// cleared: each basis vector has polynomial entries, scaled so that the
// first nonzero entry has leading coefficient 1.  The result is
// deterministic for a given input.
PolyMat poly_kernel(const PolyMat& m);

// Same kernel, but pivots are chosen nonvanishing at the given chart
// point whenever possible.  When the pointwise rank at that point equals
// the generic rank, the returned basis evaluates to a pointwise
// independent family there (the vectors pick up no spurious factors that
// vanish at the point).
PolyMat poly_kernel(const PolyMat& m, std::span<const Rat> local_point);

} // namespace vweb
