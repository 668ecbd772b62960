#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "vweb/error.hpp"

namespace vweb {

// Exact rational scalar.  mpq_class keeps values canonical (lowest terms,
// positive denominator, zero as 0/1), which the whole engine relies on.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw PreconditionError("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Parses "a" or "a/b" with optional leading sign, decimal digits only.
Rat rat_parse(std::string_view text);

// Canonical text form: "a" for integers, "a/b" otherwise.
std::string rat_str(const Rat& q);

std::string int_str(const Int& z);

Rat rat_pow(const Rat& base, unsigned exp);

// Exact binomial coefficient C(n, k); zero when k > n.
Rat rat_binomial(unsigned n, unsigned k);

} // namespace vweb
