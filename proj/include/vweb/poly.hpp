#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vweb/chart.hpp"
#include "vweb/rational.hpp"

namespace vweb {

// Exponent vector, one entry per chart variable.
using Monomial = std::vector<std::uint32_t>;

inline unsigned monomial_degree(const Monomial& m) {
    unsigned d = 0;
    for (auto e : m) d += e;
    return d;
}

// Graded lexicographic order: lower total degree first, ties broken
// lexicographically on the exponent vector.  The canonical term order
// for every stored polynomial.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        const unsigned da = monomial_degree(a);
        const unsigned db = monomial_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Sparse multivariate polynomial with exact rational coefficients.
// Invariants: every stored coefficient is nonzero; every exponent vector
// has length chart->dim(); terms are kept in graded-lex order.
class Poly {
public:
    using TermMap = std::map<Monomial, Rat, GrlexLess>;

    Poly() = default; // null polynomial, only as a placeholder before assignment
    explicit Poly(ChartPtr chart) : chart_(std::move(chart)) {}

    static Poly zero(ChartPtr chart) { return Poly(std::move(chart)); }
    static Poly constant(ChartPtr chart, Rat value);
    static Poly variable(const ChartPtr& chart, std::size_t index);
    static Poly monomial(ChartPtr chart, Monomial exps, Rat coeff);

    const ChartPtr& chart() const noexcept { return chart_; }
    const TermMap& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    // Coefficient of the constant monomial (zero if absent).
    Rat constant_value() const;
    // -1 for the zero polynomial.
    long total_degree() const noexcept;
    std::size_t term_count() const noexcept { return terms_.size(); }
    Rat coeff(const Monomial& m) const;
    // Largest term in graded-lex order; throws on zero.
    const std::pair<const Monomial, Rat>& leading_term() const;

    // Adds one term, merging and dropping a resulting zero.
    void add_term(const Monomial& exps, const Rat& coeff);

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rat& c);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Rat& c, Poly p) { return p *= c; }
    friend Poly operator*(Poly p, const Rat& c) { return p *= c; }

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Rat eval(std::span<const Rat> point) const;
    Poly partial(std::size_t var) const;

    // Substitutes images[i] for variable i; the result lives on `target`,
    // the common chart of all images.  A constant polynomial transfers
    // to `target` directly.
    Poly subst(const ChartPtr& target, std::span<const Poly> images) const;

    std::string str() const;

private:
    ChartPtr chart_;
    TermMap terms_;
};

// Real and imaginary part of p(x_1 + i y_1, ..., x_m + i y_m) on the
// doubled chart (which must be make_doubled_chart of p's chart).
std::pair<Poly, Poly> complex_split(const Poly& p, const ChartPtr& doubled);

// Parses an arithmetic expression over the chart variables: integers,
// rationals "a/b", + - * ^ and parentheses, e.g. "1 + x0*x2^2 - 3/2*x1".
// Throws ParseError on malformed input or unknown names.
Poly poly_parse(const ChartPtr& chart, std::string_view text);

} // namespace vweb
