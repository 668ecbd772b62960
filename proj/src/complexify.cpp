#include "vweb/complexify.hpp"

#include <algorithm>

#include "vweb/error.hpp"
#include "vweb/linalg.hpp"
#include "vweb/rng.hpp"

namespace vweb {

namespace {

// exponent vector of a base polynomial extended with zero y-exponents
Poly extend_poly(const Poly& p, const ChartPtr& doubled, std::size_t m) {
    Poly out(doubled);
    for (const auto& [mono, c] : p.terms()) {
        Monomial ext(2 * m, 0);
        std::copy(mono.begin(), mono.end(), ext.begin());
        out.add_term(ext, c);
    }
    return out;
}

// inverse of extend_poly; requires zero y-exponents
Poly restrict_poly(const Poly& p, const ChartPtr& base, std::size_t m) {
    Poly out(base);
    for (const auto& [mono, c] : p.terms()) {
        for (std::size_t i = m; i < mono.size(); ++i)
            if (mono[i] != 0)
                throw PreconditionError("projection: coefficient depends on a fiber variable");
        Monomial cut(mono.begin(), mono.begin() + static_cast<long>(m));
        out.add_term(cut, c);
    }
    return out;
}

} // namespace

DoubledChart DoubledChart::make(const ChartPtr& base) {
    if (!base) throw StructuralError("doubled chart of null chart");
    DoubledChart dc;
    dc.base = base;
    dc.doubled = make_doubled_chart(base);
    dc.m = base->dim();
    return dc;
}

Poly DoubledChart::pullback(const Poly& p) const {
    require_same_chart(base, p.chart(), "pullback");
    return extend_poly(p, doubled, m);
}

DForm DoubledChart::pullback(const DForm& w) const {
    require_same_chart(base, w.chart(), "pullback");
    DForm out(doubled, w.degree());
    for (const auto& [idx, p] : w.terms()) out.add_term(idx, extend_poly(p, doubled, m));
    return out;
}

DForm DoubledChart::jstar(const DForm& w) const {
    require_same_chart(doubled, w.chart(), "jstar");
    if (w.degree() != 1) throw PreconditionError("jstar: form degree must be 1");
    DForm out(doubled, 1);
    for (const auto& [idx, p] : w.terms()) {
        const std::uint32_t i = idx[0];
        if (i < m) {
            out.add_term({static_cast<std::uint32_t>(i + m)}, -p); // dx_i -> -dy_i
        } else {
            out.add_term({static_cast<std::uint32_t>(i - m)}, p); // dy_i -> dx_i
        }
    }
    return out;
}

VectorField DoubledChart::j(const VectorField& v) const {
    require_same_chart(doubled, v.chart(), "j");
    std::vector<Poly> comps(2 * m, Poly::zero(doubled));
    for (std::size_t i = 0; i < m; ++i) {
        comps[m + i] = v.component(i);  // d/dx_i -> d/dy_i
        comps[i] = -v.component(m + i); // d/dy_i -> -d/dx_i
    }
    return VectorField(doubled, std::move(comps));
}

std::vector<Rat> DoubledChart::double_point(std::span<const Rat> base_point) const {
    if (base_point.size() != m)
        throw PreconditionError("double_point: base point has wrong dimension");
    std::vector<Rat> out(base_point.begin(), base_point.end());
    out.resize(2 * m, Rat(0));
    return out;
}

VectorField DoubledChart::project_field(const VectorField& v) const {
    require_same_chart(doubled, v.chart(), "project_field");
    std::vector<Poly> comps;
    comps.reserve(m);
    for (std::size_t i = 0; i < m; ++i) comps.push_back(restrict_poly(v.component(i), base, m));
    return VectorField(base, std::move(comps));
}

namespace {

PolyMat one_form_matrix(const std::vector<DForm>& forms, const ChartPtr& chart) {
    PolyMat rows;
    rows.reserve(forms.size());
    for (const auto& w : forms) {
        require_same_chart(chart, w.chart(), "distribution annihilator");
        if (w.degree() != 1)
            throw StructuralError("distribution annihilator must consist of 1-forms");
        rows.push_back(w.one_form_coeffs());
    }
    return rows;
}

PolyMat field_matrix(const std::vector<VectorField>& fields, const ChartPtr& chart) {
    PolyMat rows;
    rows.reserve(fields.size());
    for (const auto& v : fields) {
        require_same_chart(chart, v.chart(), "distribution span");
        rows.push_back(v.components());
    }
    return rows;
}

} // namespace

Distribution::Distribution(ChartPtr chart, std::vector<DForm> annihilator,
                           std::vector<VectorField> span, std::vector<Rat> basepoint)
    : chart_(std::move(chart)), annihilator_(std::move(annihilator)), span_(std::move(span)),
      basepoint_(std::move(basepoint)) {
    if (!chart_) throw StructuralError("distribution without a chart");
    if (basepoint_.size() != chart_->dim())
        throw StructuralError("distribution basepoint has wrong dimension");
    // exact contraction invariant
    for (const auto& w : annihilator_) {
        require_same_chart(chart_, w.chart(), "distribution annihilator");
        if (w.degree() != 1)
            throw StructuralError("distribution annihilator must consist of 1-forms");
        for (const auto& v : span_) {
            if (!contract(w, v).coeff({}).is_zero())
                throw StructuralError("distribution span not annihilated exactly");
        }
    }
    // complementary ranks at the basepoint
    const int ra = rank_of_1forms_at_point(annihilator_, basepoint_);
    const int rs = rank_of_fields_at_point(span_, basepoint_);
    if (ra + rs != static_cast<int>(chart_->dim()))
        throw StructuralError("distribution ranks not complementary at basepoint");
    if (rs != static_cast<int>(span_.size()))
        throw StructuralError("distribution span degenerates at basepoint");
}

Distribution Distribution::from_annihilator(ChartPtr chart, std::vector<DForm> annihilator,
                                            std::vector<Rat> basepoint) {
    if (annihilator.empty()) throw PreconditionError("from_annihilator: no forms given");
    if (!chart || basepoint.size() != chart->dim())
        throw StructuralError("distribution basepoint has wrong dimension");
    PolyMat rows = one_form_matrix(annihilator, chart);
    PolyMat kernel = poly_kernel(rows, basepoint);
    std::vector<VectorField> span;
    span.reserve(kernel.size());
    for (auto& v : kernel) span.emplace_back(chart, std::move(v));
    return Distribution(std::move(chart), std::move(annihilator), std::move(span),
                        std::move(basepoint));
}

Distribution Distribution::from_span(ChartPtr chart, std::vector<VectorField> span,
                                     std::vector<Rat> basepoint) {
    if (span.empty()) throw PreconditionError("from_span: no fields given");
    if (!chart || basepoint.size() != chart->dim())
        throw StructuralError("distribution basepoint has wrong dimension");
    PolyMat rows = field_matrix(span, chart);
    PolyMat kernel = poly_kernel(rows, basepoint);
    std::vector<DForm> ann;
    ann.reserve(kernel.size());
    for (const auto& v : kernel) ann.push_back(DForm::one_form(chart, v));
    return Distribution(std::move(chart), std::move(ann), std::move(span),
                        std::move(basepoint));
}

Distribution transform_distribution(const DoubledChart& dc, const Distribution& d,
                                    const Rat& a, const Rat& b) {
    if (a == 0 && b == 0)
        throw PreconditionError("transform_distribution: (0, 0) is not invertible");
    require_same_chart(dc.doubled, d.chart(), "transform_distribution");
    std::vector<DForm> ann;
    ann.reserve(d.annihilator().size());
    for (const auto& w : d.annihilator()) ann.push_back(a * w - b * dc.jstar(w));
    std::vector<VectorField> span;
    span.reserve(d.span().size());
    for (const auto& v : d.span()) span.push_back(a * v + b * dc.j(v));
    return Distribution(d.chart(), std::move(ann), std::move(span), d.basepoint());
}

Distribution build_core_distribution(const DoubledChart& dc, const VeroneseCurve& c,
                                     const std::vector<ProjPoint>& anchors) {
    require_same_chart(dc.base, c.chart(), "build_core_distribution");
    if (anchors.size() != c.n() + 2)
        throw PreconditionError("core distribution needs exactly n+2 anchors, got " +
                                std::to_string(anchors.size()));
    if (!all_distinct(anchors))
        throw PreconditionError("core distribution anchors must be distinct");
    for (const auto& a : anchors) {
        if (a.is_infinity())
            throw PreconditionError("core distribution anchors must be finite; "
                                    "apply a parameter substitution first");
        if (!check_at(c, a))
            throw PreconditionError("curve is not integrable at anchor " + a.str());
    }
    std::vector<DForm> ann;
    ann.reserve(anchors.size() * c.k());
    for (const auto& a : anchors) {
        for (unsigned i = 0; i < c.k(); ++i) {
            DForm lift = dc.pullback(c.pencil(i).eval(a));
            ann.push_back(lift - a.value() * dc.jstar(lift));
        }
    }
    const auto bp = dc.double_point(c.basepoint());
    const int r = rank_of_1forms_at_point(ann, bp);
    if (r != static_cast<int>(ann.size()))
        throw StructuralError("anchor forms unexpectedly dependent at the basepoint");
    Distribution f = Distribution::from_annihilator(dc.doubled, std::move(ann), bp);
    if (f.rank() != c.k() * c.n())
        throw StructuralError("core distribution rank is not kn");
    return f;
}

bool frobenius_ann(const Distribution& d) {
    const auto& ann = d.annihilator();
    if (ann.empty()) return true; // whole tangent bundle
    if (rank_of_1forms_at_point(ann, d.basepoint()) != static_cast<int>(ann.size()))
        throw PreconditionError("frobenius_ann: dependent annihilator at basepoint");
    DForm big = ann.front();
    for (std::size_t i = 1; i < ann.size(); ++i) big = wedge(big, ann[i]);
    for (const auto& w : ann) {
        if (!wedge(exterior_d(w), big).is_zero()) return false;
    }
    return true;
}

bool frobenius_span(const Distribution& d,
                    const std::vector<std::vector<Rat>>& sample_points) {
    const auto& span = d.span();
    if (span.size() <= 1) return true;
    if (rank_of_fields_at_point(span, d.basepoint()) != static_cast<int>(span.size()))
        throw PreconditionError("frobenius_span: dependent span at basepoint");
    std::vector<VectorField> brackets;
    for (std::size_t i = 0; i < span.size(); ++i)
        for (std::size_t j = i + 1; j < span.size(); ++j)
            brackets.push_back(lie_bracket(span[i], span[j]));
    for (const auto& pt : sample_points) {
        const int base_rank = rank_of_fields_at_point(span, pt);
        for (const auto& br : brackets) {
            std::vector<VectorField> extended = span;
            extended.push_back(br);
            if (rank_of_fields_at_point(extended, pt) > base_rank) return false;
        }
    }
    return true;
}

std::vector<std::vector<Rat>> default_sample_points(const ChartPtr& chart,
                                                    std::span<const Rat> basepoint,
                                                    std::uint64_t seed, unsigned extra) {
    std::vector<std::vector<Rat>> pts;
    pts.emplace_back(basepoint.begin(), basepoint.end());
    DetRng rng(seed);
    for (unsigned i = 0; i < extra; ++i) {
        std::vector<Rat> p;
        p.reserve(chart->dim());
        for (std::size_t j = 0; j < chart->dim(); ++j) p.push_back(rng.small_rat(5, 3));
        pts.push_back(std::move(p));
    }
    return pts;
}

bool RotationReport::all_ok() const {
    return hypotheses_ok() &&
           std::all_of(per_t.begin(), per_t.end(), [](const PointCheck& p) { return p.ok; });
}

RotationReport rotation_family_check(const DoubledChart& dc, const Distribution& d,
                                     const std::vector<ProjPoint>& ts) {
    RotationReport r;
    r.hyp_d_ok = frobenius_ann(d);
    r.hyp_jd_ok = frobenius_ann(transform_distribution(dc, d, Rat(0), Rat(1)));
    if (!r.hypotheses_ok()) return r;
    for (const auto& t : ts) {
        Distribution rotated = t.is_infinity()
                                   ? transform_distribution(dc, d, Rat(0), Rat(1))
                                   : transform_distribution(dc, d, Rat(1), t.value());
        r.per_t.push_back({t, frobenius_ann(rotated)});
    }
    return r;
}

bool nijenhuis_check(const DoubledChart& dc, const VectorField& v, const VectorField& w) {
    require_same_chart(dc.doubled, v.chart(), "nijenhuis_check");
    require_same_chart(dc.doubled, w.chart(), "nijenhuis_check");
    const VectorField lhs =
        dc.j(lie_bracket(v, w)) - dc.j(lie_bracket(dc.j(v), dc.j(w)));
    const VectorField rhs = lie_bracket(dc.j(v), w) + lie_bracket(v, dc.j(w));
    return lhs == rhs;
}

bool ComplexifyReport::all_pass() const {
    if (!redundancy_ok) return false;
    for (const auto& item : items) {
        if (item.empty()) return false;
        for (const auto& c : item)
            if (!c.ok) return false;
    }
    return true;
}

ComplexifyReport check_complexification(const VeroneseCurve& c,
                                        const std::vector<ProjPoint>& anchors,
                                        const std::vector<ProjPoint>& sample_ts) {
    const DoubledChart dc = DoubledChart::make(c.chart());
    const Distribution f = build_core_distribution(dc, c, anchors);
    ComplexifyReport rep;
    rep.anchors = anchors;
    rep.rank_f = f.rank();

    // fresh anchors must stay inside the annihilator span (the degree
    // n+2 curve of anchor forms spans a fixed space)
    {
        Rat fresh(0);
        for (const auto& a : anchors)
            if (a.value() >= fresh) fresh = a.value() + 1;
        PolyMat rows = one_form_matrix(f.annihilator(), dc.doubled);
        const int base_rank = poly_rank(rows);
        bool ok = base_rank == static_cast<int>(f.annihilator().size());
        for (int extra = 0; extra < 2 && ok; ++extra) {
            const Rat b = fresh + extra;
            for (unsigned i = 0; i < c.k(); ++i) {
                DForm lift = dc.pullback(c.pencil(i).eval(ProjPoint::finite(b)));
                DForm form = lift - b * dc.jstar(lift);
                PolyMat extended = rows;
                extended.push_back(form.one_form_coeffs());
                if (poly_rank(extended) != base_rank) {
                    ok = false;
                    break;
                }
            }
        }
        rep.redundancy_ok = ok;
    }

    const std::size_t m = dc.m;
    // covectors of the y-foliation's conormal: all dx_i
    PolyMat conormal;
    for (std::size_t i = 0; i < m; ++i)
        conormal.push_back(DForm::covector(dc.doubled, i).one_form_coeffs());

    for (const auto& t : sample_ts) {
        const Rat ta = t.is_infinity() ? Rat(0) : Rat(1);
        const Rat tb = t.is_infinity() ? Rat(1) : t.value();

        // item 1: (Id + tJ)F integrable
        const Distribution plus = transform_distribution(dc, f, ta, tb);
        const bool i1 = frobenius_ann(plus);
        rep.items[0].push_back({t, i1, i1 ? "" : "frobenius fails for (Id + tJ)F"});

        // item 2: rank kn at the doubled basepoint
        const int rank2 = rank_of_fields_at_point(plus.span(), f.basepoint());
        const bool i2 = rank2 == static_cast<int>(c.k() * c.n());
        rep.items[1].push_back(
            {t, i2, i2 ? "" : "rank " + std::to_string(rank2) + " != kn"});

        // items 3 and 4 via the annihilator V1 of (Id - tJ)F
        const Distribution minus = transform_distribution(dc, f, ta, -tb);
        PolyMat v1 = one_form_matrix(minus.annihilator(), dc.doubled);
        const int r1 = poly_rank(v1);

        // item 3: V1 meets the conormal of the y-foliation in dimension
        // exactly k, so (Id - tJ)F + TY is a corank-k projectable bundle
        PolyMat v12 = v1;
        for (const auto& row : conormal) v12.push_back(row);
        const int r12 = poly_rank(v12);
        const int meet = r1 + static_cast<int>(m) - r12;
        const bool i3 = meet == static_cast<int>(c.k());
        rep.items[2].push_back(
            {t, i3,
             i3 ? "" : "conormal intersection has dimension " + std::to_string(meet)});

        // item 4: the pulled-back member covectors at t lie inside V1 and
        // are independent, so the projection is exactly the member
        bool i4 = true;
        std::string w4;
        PolyMat members;
        for (unsigned i = 0; i < c.k(); ++i) {
            DForm lift = dc.pullback(c.pencil(i).eval(t));
            members.push_back(lift.one_form_coeffs());
            PolyMat ext = v1;
            ext.push_back(members.back());
            if (poly_rank(ext) != r1) {
                i4 = false;
                w4 = "pullback of member covector " + std::to_string(i) +
                     " escapes the annihilator";
                break;
            }
        }
        if (i4 && poly_rank(members) != static_cast<int>(c.k())) {
            i4 = false;
            w4 = "member covectors degenerate";
        }
        rep.items[3].push_back({t, i4, w4});
    }
    return rep;
}

} // namespace vweb
