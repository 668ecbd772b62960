#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vweb/poly.hpp"

namespace vweb {

// Strictly increasing list of covector indices naming dx_{i1} ^ ... ^ dx_{ip}.
using IndexTuple = std::vector<std::uint32_t>;

class VectorField;

// Differential p-form with polynomial coefficients, stored sparsely as a
// map from increasing index tuples to nonzero polynomials.  Degree 0 is a
// plain polynomial (the empty tuple).
class DForm {
public:
    using TermMap = std::map<IndexTuple, Poly>;

    DForm(ChartPtr chart, unsigned degree);

    static DForm zero(ChartPtr chart, unsigned degree) { return DForm(std::move(chart), degree); }
    static DForm from_poly(const Poly& p);
    // The coordinate covector dx_i.
    static DForm covector(const ChartPtr& chart, std::size_t i);
    // Sum of coeffs[i] * dx_i.
    static DForm one_form(const ChartPtr& chart, std::span<const Poly> coeffs);

    const ChartPtr& chart() const noexcept { return chart_; }
    unsigned degree() const noexcept { return degree_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }
    // Coefficient of a (sorted) index tuple; zero polynomial if absent.
    Poly coeff(const IndexTuple& idx) const;

    // Adds coeff * dx_{idx}; idx may be unsorted (the sign of the sorting
    // permutation is applied) and is dropped if it repeats an index.
    void add_term(IndexTuple idx, Poly coeff);

    DForm operator-() const;
    DForm& operator+=(const DForm& o);
    DForm& operator-=(const DForm& o);
    friend DForm operator+(DForm a, const DForm& b) { return a += b; }
    friend DForm operator-(DForm a, const DForm& b) { return a -= b; }
    friend DForm operator*(const Poly& f, const DForm& w);
    friend DForm operator*(const Rat& c, const DForm& w);

    bool operator==(const DForm& o) const;
    bool operator!=(const DForm& o) const { return !(*this == o); }

    friend DForm wedge(const DForm& a, const DForm& b);

    // Coefficients of a 1-form as a dense vector indexed by variable.
    std::vector<Poly> one_form_coeffs() const;

    std::string str() const;

private:
    ChartPtr chart_;
    unsigned degree_ = 0;
    TermMap terms_;
};

DForm wedge(const DForm& a, const DForm& b);
DForm exterior_d(const DForm& w);
// Interior product i_v w (degree drops by one; degree 0 input is invalid).
DForm contract(const DForm& w, const VectorField& v);

// Polynomial vector field, one component per chart variable.
class VectorField {
public:
    VectorField(ChartPtr chart, std::vector<Poly> components);

    static VectorField zero(const ChartPtr& chart);
    // The coordinate field d/dx_i.
    static VectorField basis(const ChartPtr& chart, std::size_t i);

    const ChartPtr& chart() const noexcept { return chart_; }
    const std::vector<Poly>& components() const noexcept { return comps_; }
    const Poly& component(std::size_t i) const { return comps_.at(i); }
    bool is_zero() const noexcept;

    VectorField operator-() const;
    VectorField& operator+=(const VectorField& o);
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(const VectorField& a, const VectorField& b);
    friend VectorField operator*(const Poly& f, const VectorField& v);
    friend VectorField operator*(const Rat& c, const VectorField& v);

    bool operator==(const VectorField& o) const;
    bool operator!=(const VectorField& o) const { return !(*this == o); }

    std::string str() const;

private:
    ChartPtr chart_;
    std::vector<Poly> comps_;
};

// Lie bracket [v, w].
VectorField lie_bracket(const VectorField& v, const VectorField& w);

// Rank of the values of the given 1-forms at a chart point.
int rank_of_1forms_at_point(std::span<const DForm> forms, std::span<const Rat> point);

// Rank of the values of the given vector fields at a chart point.
int rank_of_fields_at_point(std::span<const VectorField> fields, std::span<const Rat> point);

} // namespace vweb
