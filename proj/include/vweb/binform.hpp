#pragma once

#include <vector>

#include "vweb/pencil.hpp"
#include "vweb/rational.hpp"

namespace vweb {

// Homogeneous binary form sum_d c[d] s^(D-d) t^d of degree D = c.size()-1
// with rational coefficients.  The zero form of any degree has all
// coefficients zero.
struct BinForm {
    std::vector<Rat> c;

    explicit BinForm(std::vector<Rat> coeffs);
    static BinForm zero(unsigned degree);

    unsigned degree() const { return static_cast<unsigned>(c.size()) - 1; }
    bool is_zero() const;

    Rat eval(const Rat& s, const Rat& t) const;

    friend bool operator==(const BinForm& a, const BinForm& b) { return a.c == b.c; }
};

// Greatest common divisor, monic in its leading s-power; the gcd of two
// zero forms is the zero form of degree 0.
BinForm binform_gcd(const BinForm& a, const BinForm& b);

struct BinRoots {
    // Rational projective roots, each listed once, in discovery order:
    // [0:1] first if present, then finite roots by ascending value.
    std::vector<ProjPoint> rational;
    // Degree of the factor with no rational roots (0 when the form splits
    // over the rationals).
    unsigned residual_degree = 0;
};

// All rational points of the projective line where the form vanishes.
// Precondition: the form is not identically zero.
BinRoots binform_rational_roots(const BinForm& f);

} // namespace vweb
