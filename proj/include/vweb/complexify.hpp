#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vweb/web.hpp"

namespace vweb {

// Doubled-chart model of the complexification of a base chart: base
// variables x_i paired with partners y_i, carrying the constant complex
// structure J(d/dx_i) = d/dy_i, J(d/dy_i) = -d/dx_i and its adjoint
// J*(dx_i) = -dy_i, J*(dy_i) = dx_i.  The fibration y = const plays the
// role of the projection to the base.
struct DoubledChart {
    ChartPtr base;
    ChartPtr doubled;
    std::size_t m = 0;

    static DoubledChart make(const ChartPtr& base);

    // Base objects reinterpreted on the doubled chart (the pullback under
    // the projection along the y-foliation).
    Poly pullback(const Poly& p) const;
    DForm pullback(const DForm& w) const;

    // The adjoint action on 1-forms.
    DForm jstar(const DForm& w) const;
    // The action on vector fields.
    VectorField j(const VectorField& v) const;

    // Doubled point (x, 0) over a base point x.
    std::vector<Rat> double_point(std::span<const Rat> base_point) const;

    // Projection of a field along the y-foliation: drops the y-components
    // and lands on the base chart; requires the x-components free of
    // y-variables.
    VectorField project_field(const VectorField& v) const;
};

// Distribution presented by both an annihilator (1-forms) and a span
// (vector fields), kept exactly consistent: every span field is
// annihilated by every annihilator form as a polynomial identity, and at
// the basepoint the two ranks are complementary.
class Distribution {
public:
    Distribution(ChartPtr chart, std::vector<DForm> annihilator,
                 std::vector<VectorField> span, std::vector<Rat> basepoint);

    // Derives the span as the exact kernel of the annihilator matrix over
    // the rational-function field (denominators cleared).
    static Distribution from_annihilator(ChartPtr chart, std::vector<DForm> annihilator,
                                         std::vector<Rat> basepoint);
    static Distribution from_span(ChartPtr chart, std::vector<VectorField> span,
                                  std::vector<Rat> basepoint);

    const ChartPtr& chart() const noexcept { return chart_; }
    const std::vector<DForm>& annihilator() const noexcept { return annihilator_; }
    const std::vector<VectorField>& span() const noexcept { return span_; }
    const std::vector<Rat>& basepoint() const noexcept { return basepoint_; }
    // Rank of the span at the basepoint.
    unsigned rank() const noexcept { return static_cast<unsigned>(span_.size()); }

private:
    ChartPtr chart_;
    std::vector<DForm> annihilator_;
    std::vector<VectorField> span_;
    std::vector<Rat> basepoint_;
};

// (a Id + b J) applied to D: span fields transformed by a Id + b J, the
// annihilator by a Id - b J*.  Rank is preserved ((a, b) != (0, 0)).
Distribution transform_distribution(const DoubledChart& dc, const Distribution& d,
                                    const Rat& a, const Rat& b);

// The common core of the complexified member distributions over n+2
// distinct finite anchor parameters: annihilated by the k(n+2) forms
// (Id - a J*) pulled back from the members at each anchor a.  The curve
// must be integrable at every anchor.  Rank is kn.
Distribution build_core_distribution(const DoubledChart& dc, const VeroneseCurve& c,
                                     const std::vector<ProjPoint>& anchors);

// Exact dual Frobenius criterion: d(alpha) ^ alpha_1 ^ ... ^ alpha_r = 0
// for every annihilator generator alpha.
bool frobenius_ann(const Distribution& d);

// Pointwise bracket-closure cross-check at the given sample points.
bool frobenius_span(const Distribution& d,
                    const std::vector<std::vector<Rat>>& sample_points);

// Basepoint plus `extra` deterministic pseudo-random chart points.
std::vector<std::vector<Rat>> default_sample_points(const ChartPtr& chart,
                                                    std::span<const Rat> basepoint,
                                                    std::uint64_t seed, unsigned extra = 4);

// Checks that the whole rotated family (Id + tJ)D stays integrable,
// given that D and JD are.  A hypothesis failure is reported distinctly
// and leaves the per-t list empty.
struct RotationReport {
    bool hyp_d_ok = false;
    bool hyp_jd_ok = false;
    std::vector<PointCheck> per_t;

    bool hypotheses_ok() const { return hyp_d_ok && hyp_jd_ok; }
    bool all_ok() const;
};

RotationReport rotation_family_check(const DoubledChart& dc, const Distribution& d,
                                     const std::vector<ProjPoint>& ts);

// The compatibility identity of the constant structure J with the Lie
// bracket: J[v,w] - J[Jv,Jw] = [Jv,w] + [v,Jw].  Must hold for every
// pair of polynomial fields.
bool nijenhuis_check(const DoubledChart& dc, const VectorField& v, const VectorField& w);

struct ItemCheck {
    ProjPoint t;
    bool ok = false;
    std::string witness; // empty when ok
};

// Per-parameter results for the four complexification claims:
// item 1: (Id + tJ) core is integrable;
// item 2: its rank at the doubled basepoint is kn;
// item 3: (Id - tJ) core is projectable along the y-foliation;
// item 4: its projection is the member distribution at t.
struct ComplexifyReport {
    std::vector<ProjPoint> anchors;
    unsigned rank_f = 0;
    std::array<std::vector<ItemCheck>, 4> items;
    // fresh anchor forms stay inside the annihilator span
    bool redundancy_ok = false;

    bool all_pass() const;
};

ComplexifyReport check_complexification(const VeroneseCurve& c,
                                        const std::vector<ProjPoint>& anchors,
                                        const std::vector<ProjPoint>& sample_ts);

} // namespace vweb
