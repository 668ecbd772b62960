#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vweb/pencil.hpp"

namespace vweb {

// Provenance and expected behaviour recorded by the corpus generators.
struct GroundTruth {
    std::string generator;
    std::uint64_t seed = 0;
    // expected integrability locus: the whole parameter line, or a finite
    // rational list (plus a flag for irrational/complex factors)
    bool locus_all = false;
    std::vector<ProjPoint> locus;
    bool residual = false;
    // true when the chart realizes every member distribution by affine
    // first integrals (flat, rescaled and parameter-substituted families)
    bool adapted_chart = false;
    // set when a perturbation turned out to change nothing
    bool absorbed = false;
    // the member at parameter a coincides with the metadata member at
    // param_map(a); identity for curves built directly over a flat base
    Moebius param_map = Moebius::identity();
    // k groups of n+1 polynomials; the member distribution at [sigma:tau]
    // is cut out by the differentials of sum_l sigma^(n-l) tau^l *
    // first_integrals[group][l], after applying param_map
    std::optional<std::vector<std::vector<Poly>>> first_integrals;
    // polynomial chart map that re-expresses the curve over its flat
    // model (inverse of the generating substitution)
    std::optional<std::vector<Poly>> adapted_chart_map;
};

// A generalized Veronese curve of distributions: k homogeneous pencils of
// 1-forms of parameter degree n on a chart of dimension m = k(n+1), whose
// m coefficient forms are independent at the basepoint.  The member
// distribution at parameter t is the common kernel of the k forms at t.
class VeroneseCurve {
public:
    VeroneseCurve(unsigned k, unsigned n, ChartPtr chart, std::vector<FormPencil> pencils,
                  std::vector<Rat> basepoint, std::optional<GroundTruth> manifest = {});

    // Same shape validation but no coframe requirement; for diagnostics
    // and negative tests.
    static VeroneseCurve make_unchecked(unsigned k, unsigned n, ChartPtr chart,
                                        std::vector<FormPencil> pencils,
                                        std::vector<Rat> basepoint,
                                        std::optional<GroundTruth> manifest = {});

    unsigned k() const noexcept { return k_; }
    unsigned n() const noexcept { return n_; }
    unsigned m() const noexcept { return k_ * (n_ + 1); }
    const ChartPtr& chart() const noexcept { return chart_; }
    const std::vector<FormPencil>& pencils() const noexcept { return pencils_; }
    const FormPencil& pencil(std::size_t i) const { return pencils_.at(i); }
    const std::vector<Rat>& basepoint() const noexcept { return basepoint_; }
    const std::optional<GroundTruth>& manifest() const noexcept { return manifest_; }
    void set_manifest(GroundTruth g) { manifest_ = std::move(g); }

    // All m coefficient forms, pencil by pencil.
    std::vector<DForm> coefficient_forms() const;
    bool coframe_at(std::span<const Rat> point) const;

private:
    struct Unchecked {};
    VeroneseCurve(Unchecked, unsigned k, unsigned n, ChartPtr chart,
                  std::vector<FormPencil> pencils, std::vector<Rat> basepoint,
                  std::optional<GroundTruth> manifest);

    unsigned k_, n_;
    ChartPtr chart_;
    std::vector<FormPencil> pencils_;
    std::vector<Rat> basepoint_;
    std::optional<GroundTruth> manifest_;
};

bool validate_coframe(const VeroneseCurve& c, std::span<const Rat> point);

// The obstruction pencil d(gamma^i) ^ gamma^1 ^ ... ^ gamma^k, a pencil
// of (k+2)-forms of parameter degree n(k+1).  The member distribution at
// q is integrable iff every obstruction pencil vanishes at q.
FormPencil integrability_pencil(const VeroneseCurve& c, unsigned i); // i is 0-based

// True iff all k obstruction pencils evaluate to the zero form at q
// (zero as a form with polynomial coefficients on the whole chart).
bool check_at(const VeroneseCurve& c, const ProjPoint& q);

enum class Verdict {
    IntegrableEverywhere,
    IntegrableAtListedPointsOnly,
    NotIntegrableAtQueriedPoints,
    ProbableIntegrable,
};

std::string verdict_str(Verdict v);

struct PointCheck {
    ProjPoint point;
    bool ok = false;
};

// A concrete nonzero certificate: coefficient d of obstruction pencil
// `pencil` has a nonvanishing polynomial at the given covector tuple.
// Randomized mode adds the chart point and value that exposed it.
struct ObstructionWitness {
    unsigned pencil = 0;
    unsigned coeff_index = 0;
    IndexTuple covectors;
    Poly poly;
    std::optional<std::vector<Rat>> point;
    std::optional<Rat> value;
};

struct SZInfo {
    unsigned degree = 0;
    unsigned long grid = 0;
    unsigned samples = 0;
};

struct IntegrabilityReport {
    Verdict verdict = Verdict::NotIntegrableAtQueriedPoints;
    std::string mode;  // full | sparse | naive | randomized
    // what the verdict rests on: coefficient-identity, n-plus-3-point-
    // criterion, degree-bound-sampling, or schwartz-zippel
    std::string basis;
    bool theorem_based = false;
    std::vector<PointCheck> points;
    std::vector<ObstructionWitness> witnesses;
    unsigned pencil_param_degree = 0;
    std::size_t max_coeff_terms = 0;
    std::optional<SZInfo> sz;
    double elapsed_ms = 0; // volatile, excluded from canonical serialization

    bool passed() const {
        return verdict == Verdict::IntegrableEverywhere || verdict == Verdict::ProbableIntegrable;
    }
};

// Exact verdict from the identical vanishing of all obstruction pencils.
IntegrabilityReport check_full(const VeroneseCurve& c);

// Pointwise checks at >= n+3 distinct points; an all-pass verdict is
// integrable-everywhere by the sparse criterion and flagged theorem_based.
IntegrabilityReport check_sparse(const VeroneseCurve& c, const std::vector<ProjPoint>& points);

// Pointwise checks at >= n(k+1)+1 distinct points; equivalent to
// check_full because a vanishing degree-n(k+1) pencil is determined by
// that many values.
IntegrabilityReport check_naive(const VeroneseCurve& c, const std::vector<ProjPoint>& points);

// Schwartz-Zippel identity test of the obstruction coefficients on a
// rational grid; deterministic for a given seed.
IntegrabilityReport randomized_check(const VeroneseCurve& c, unsigned samples,
                                     std::uint64_t seed);

struct Locus {
    bool all = false;
    std::vector<ProjPoint> points;
    bool residual = false;
    unsigned residual_degree = 0;
};

// Exact set of rational parameter points where all member distributions
// are integrable: the rational projective roots of the gcd of every
// obstruction coefficient, viewed as binary forms in (s, t).  Irrational
// or complex gcd factors are reported by residual degree only.
Locus integrability_locus(const VeroneseCurve& c);

// True iff the k * |points| covectors obtained by evaluating every pencil
// at every point have maximal rank min(k * |points|, m) at the base point.
bool general_position_check(const VeroneseCurve& c, const std::vector<ProjPoint>& points,
                            std::span<const Rat> base);

// Structural identity behind "passing at all finite points forces the
// point at infinity": evaluation of each obstruction pencil at [0:1]
// equals its top bihomogeneous coefficient.
bool infinity_consistency(const VeroneseCurve& c);

} // namespace vweb
