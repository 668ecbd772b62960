#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vweb/dform.hpp"

namespace vweb {

// Point of the projective parameter line, kept in canonical form:
// finite points as [1 : t], the point at infinity as [0 : 1].
struct ProjPoint {
    Rat s{1}, t{0};

    static ProjPoint finite(Rat value) { return ProjPoint{Rat(1), std::move(value)}; }
    static ProjPoint infinity() { return ProjPoint{Rat(0), Rat(1)}; }
    // Canonicalizes arbitrary homogeneous coordinates; throws on (0, 0).
    static ProjPoint from_coords(const Rat& s, const Rat& t);
    // Accepts a decimal rational ("-3/2") or "inf".
    static ProjPoint parse(std::string_view text);

    bool is_infinity() const { return s == 0; }
    // The affine value; throws at infinity.
    const Rat& value() const;
    std::string str() const;

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
        return a.s == b.s && a.t == b.t;
    }
    friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }
};

bool all_distinct(const std::vector<ProjPoint>& points);

// Invertible parameter substitution (s, t) -> (a s + b t, c s + d t),
// acting on points of the projective line by the same matrix.
struct Moebius {
    Rat a{1}, b{0}, c{0}, d{1};

    static Moebius identity() { return {}; }
    static Moebius of(Rat a, Rat b, Rat c, Rat d);

    Rat det() const { return a * d - b * c; }
    // Projective inverse (the adjugate).
    Moebius inverse() const { return Moebius{d, -b, -c, a}; }
    Moebius compose(const Moebius& then) const; // this applied first, `then` second
    ProjPoint apply(const ProjPoint& p) const;
    bool is_identity() const { return b == 0 && c == 0 && a == d; }
};

// Homogeneous pencil of p-forms P(s, t) = sum_j s^(n-j) t^j w_j with the
// w_j p-forms on a common chart.  The parameter degree n is the number of
// coefficients minus one.
class FormPencil {
public:
    FormPencil(ChartPtr chart, unsigned form_degree, std::vector<DForm> coeffs);

    static FormPencil zero(ChartPtr chart, unsigned form_degree, unsigned param_degree);

    const ChartPtr& chart() const noexcept { return chart_; }
    unsigned form_degree() const noexcept { return form_degree_; }
    unsigned param_degree() const noexcept { return static_cast<unsigned>(coeffs_.size()) - 1; }
    const std::vector<DForm>& coeffs() const noexcept { return coeffs_; }
    const DForm& coeff(std::size_t j) const { return coeffs_.at(j); }

    bool is_zero() const noexcept;
    DForm eval(const ProjPoint& p) const;

    FormPencil operator-() const;
    FormPencil& operator+=(const FormPencil& o);
    friend FormPencil operator+(FormPencil a, const FormPencil& b) { return a += b; }
    friend FormPencil operator-(FormPencil a, const FormPencil& b) { return a += -b; }
    // Coefficientwise scaling by a polynomial (no parameter dependence).
    friend FormPencil operator*(const Poly& f, const FormPencil& p);
    friend FormPencil operator*(const Rat& c, const FormPencil& p);

    bool operator==(const FormPencil& o) const;
    bool operator!=(const FormPencil& o) const { return !(*this == o); }

private:
    ChartPtr chart_;
    unsigned form_degree_;
    std::vector<DForm> coeffs_;
};

// Coefficientwise exterior derivative; form degree rises by one.
FormPencil pencil_d(const FormPencil& p);

// Wedge of pencils; parameter degrees add.
FormPencil pencil_wedge(const FormPencil& a, const FormPencil& b);

// Substitutes (s, t) -> (a s + b t, c s + d t).  Evaluating the result at
// a point q equals evaluating the original at g.apply(q).
FormPencil moebius_transform(const FormPencil& p, const Moebius& g);

bool pencil_is_zero(const FormPencil& p);

} // namespace vweb
