#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "vweb/complexify.hpp"
#include "vweb/linalg.hpp"

using namespace vweb;

namespace {

// flat model: pencil i holds dx_{i(n+1)} + t dx_{i(n+1)+1} + ...
VeroneseCurve flat_curve(unsigned k, unsigned n) {
    const unsigned m = k * (n + 1);
    auto chart = make_coordinate_chart("flat", m);
    std::vector<FormPencil> pencils;
    for (unsigned i = 0; i < k; ++i) {
        std::vector<DForm> coeffs;
        for (unsigned j = 0; j <= n; ++j)
            coeffs.push_back(DForm::covector(chart, i * (n + 1) + j));
        pencils.emplace_back(chart, 1, std::move(coeffs));
    }
    return VeroneseCurve(k, n, chart, std::move(pencils),
                         std::vector<Rat>(m, Rat(0)));
}

// gamma(t) = dx0 + (t + (t^2 - t) x2) dx1 + t^2 dx2
VeroneseCurve perturbed_curve() {
    auto c = make_coordinate_chart("pert", 3);
    Poly x2 = Poly::variable(c, 2);
    Poly one = Poly::constant(c, rat(1));
    DForm w0 = DForm::covector(c, 0);
    DForm w1 = (one - x2) * DForm::covector(c, 1);
    DForm w2 = x2 * DForm::covector(c, 1) + DForm::covector(c, 2);
    return VeroneseCurve(1, 2, c, {FormPencil(c, 1, {w0, w1, w2})},
                         std::vector<Rat>(3, Rat(0)));
}

// flat k=1, n=2 expressed through the substitution x2 -> x2 + x1^2:
// gamma(t) = d(x0 + t x1 + t^2 (x2 + x1^2)).  Integrable everywhere, but
// the chart does not realize the members by affine functions.
VeroneseCurve sheared_curve() {
    auto c = make_coordinate_chart("shear", 3);
    Poly x1 = Poly::variable(c, 1);
    DForm w0 = DForm::covector(c, 0);
    DForm w1 = DForm::covector(c, 1);
    DForm w2 = (Poly::constant(c, rat(2)) * x1) * DForm::covector(c, 1) +
               DForm::covector(c, 2);
    return VeroneseCurve(1, 2, c, {FormPencil(c, 1, {w0, w1, w2})},
                         std::vector<Rat>(3, Rat(0)));
}

ProjPoint fin(long v, long d = 1) { return ProjPoint::finite(rat(v, d)); }

std::vector<Rat> origin(std::size_t n) { return std::vector<Rat>(n, Rat(0)); }

} // namespace

TEST_CASE("pullback and projection along the fiber foliation") {
    auto base = make_coordinate_chart("b", 2);
    DoubledChart dc = DoubledChart::make(base);
    CHECK(dc.m == 2);
    CHECK(dc.doubled->dim() == 4);
    CHECK(dc.doubled->vars == std::vector<std::string>{"x0", "x1", "y0", "y1"});

    CHECK(dc.pullback(DForm::covector(base, 0)) == DForm::covector(dc.doubled, 0));

    Poly x1b = Poly::variable(base, 1);
    DForm lifted = dc.pullback(x1b * DForm::covector(base, 0));
    CHECK(lifted == Poly::variable(dc.doubled, 1) * DForm::covector(dc.doubled, 0));
    // no fiber components appear
    for (std::size_t i = 0; i < 2; ++i) {
        DForm c = contract(lifted, VectorField::basis(dc.doubled, 2 + i));
        CHECK(c.coeff({}).is_zero());
    }

    // polynomial pullback is a ring map
    DetRng rng(41);
    for (int it = 0; it < 20; ++it) {
        Poly p = oracle::random_poly(rng, base, 3, 4);
        Poly q = oracle::random_poly(rng, base, 3, 4);
        CHECK(dc.pullback(p * q) == dc.pullback(p) * dc.pullback(q));
        CHECK(dc.pullback(p + q) == dc.pullback(p) + dc.pullback(q));
    }

    CHECK(dc.double_point(origin(2)) == origin(4));
    std::vector<Rat> pt{rat(3), rat(-1, 2)};
    auto dp = dc.double_point(pt);
    CHECK(dp == std::vector<Rat>{rat(3), rat(-1, 2), rat(0), rat(0)});
    CHECK_THROWS_AS(dc.double_point(origin(3)), PreconditionError);

    // field projection drops the fiber components
    VectorField v(dc.doubled,
                  {Poly::variable(dc.doubled, 1), Poly::constant(dc.doubled, rat(5)),
                   Poly::variable(dc.doubled, 0), Poly::variable(dc.doubled, 2)});
    VectorField pv = dc.project_field(v);
    CHECK(pv == VectorField(base, {Poly::variable(base, 1), Poly::constant(base, rat(5))}));
    // not projectable: x-component depends on a fiber variable
    VectorField bad(dc.doubled,
                    {Poly::variable(dc.doubled, 2), Poly::zero(dc.doubled),
                     Poly::zero(dc.doubled), Poly::zero(dc.doubled)});
    CHECK_THROWS_AS(dc.project_field(bad), PreconditionError);
}

TEST_CASE("complex structure action tables") {
    auto base = make_coordinate_chart("b", 3);
    DoubledChart dc = DoubledChart::make(base);

    CHECK(dc.jstar(DForm::covector(dc.doubled, 0)) == -DForm::covector(dc.doubled, 3));
    CHECK(dc.jstar(DForm::covector(dc.doubled, 3)) == DForm::covector(dc.doubled, 0));
    CHECK(dc.jstar(dc.jstar(DForm::covector(dc.doubled, 0))) ==
          -DForm::covector(dc.doubled, 0));

    for (std::size_t i = 0; i < 6; ++i) {
        // J J = -Id and J* J* = -Id on the whole basis
        VectorField e = VectorField::basis(dc.doubled, i);
        CHECK(dc.j(dc.j(e)) == -e);
        DForm w = DForm::covector(dc.doubled, i);
        CHECK(dc.jstar(dc.jstar(w)) == -w);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(dc.j(VectorField::basis(dc.doubled, i)) == VectorField::basis(dc.doubled, 3 + i));
        CHECK(dc.j(VectorField::basis(dc.doubled, 3 + i)) ==
              -VectorField::basis(dc.doubled, i));
        // adjointness ties the two tables together: (J*a)(v) = a(Jv)
        CHECK(dc.jstar(DForm::covector(dc.doubled, i)) ==
              -DForm::covector(dc.doubled, 3 + i));
    }

    DetRng rng(42);
    for (int it = 0; it < 25; ++it) {
        std::vector<Poly> ac, vc;
        for (std::size_t i = 0; i < 6; ++i) {
            ac.push_back(oracle::random_poly(rng, dc.doubled, 2, 2));
            vc.push_back(oracle::random_poly(rng, dc.doubled, 2, 2));
        }
        DForm a = DForm::one_form(dc.doubled, ac);
        VectorField v(dc.doubled, vc);
        CHECK(contract(dc.jstar(a), v) == contract(a, dc.j(v)));
    }

    CHECK_THROWS_AS(dc.jstar(DForm::from_poly(Poly::variable(dc.doubled, 0))),
                    PreconditionError);
}

TEST_CASE("distribution invariants and kernel derivation") {
    auto c3 = make_coordinate_chart("c", 3);

    Distribution d = Distribution::from_annihilator(
        c3, {DForm::covector(c3, 0)}, origin(3));
    CHECK(d.rank() == 2);
    CHECK(d.annihilator().size() == 1);
    for (const auto& v : d.span())
        CHECK(contract(d.annihilator()[0], v).coeff({}).is_zero());

    // span presentation of the same plane field
    Distribution ds = Distribution::from_span(
        c3, {VectorField::basis(c3, 1), VectorField::basis(c3, 2)}, origin(3));
    CHECK(ds.annihilator().size() == 1);
    CHECK(ds.annihilator()[0] == DForm::covector(c3, 0));

    // polynomial coefficients survive the kernel solve exactly
    Poly x0 = Poly::variable(c3, 0);
    DForm contact = DForm::covector(c3, 2) - x0 * DForm::covector(c3, 1);
    Distribution dcntct = Distribution::from_annihilator(c3, {contact}, origin(3));
    CHECK(dcntct.rank() == 2);
    for (const auto& v : dcntct.span())
        CHECK(contract(contact, v).coeff({}).is_zero());

    // span field not annihilated
    CHECK_THROWS_AS(Distribution(c3, {DForm::covector(c3, 0)},
                                 {VectorField::basis(c3, 0)}, origin(3)),
                    StructuralError);
    // ranks not complementary
    CHECK_THROWS_AS(Distribution(c3, {DForm::covector(c3, 0)},
                                 {VectorField::basis(c3, 1)}, origin(3)),
                    StructuralError);
    // span degenerates at the basepoint
    CHECK_THROWS_AS(Distribution(c3, {DForm::covector(c3, 0)},
                                 {VectorField::basis(c3, 1),
                                  x0 * VectorField::basis(c3, 1)},
                                 origin(3)),
                    StructuralError);
    // basepoint dimension mismatch
    CHECK_THROWS_AS(Distribution::from_annihilator(c3, {DForm::covector(c3, 0)}, origin(2)),
                    StructuralError);
}

TEST_CASE("rotations of a distribution") {
    auto base = make_coordinate_chart("b", 2);
    DoubledChart dc = DoubledChart::make(base);
    Poly x0 = Poly::variable(dc.doubled, 0);
    DForm a = DForm::covector(dc.doubled, 1) - x0 * DForm::covector(dc.doubled, 2);
    Distribution d = Distribution::from_annihilator(dc.doubled, {a}, origin(4));

    // (1, 0) is the identity
    Distribution id = transform_distribution(dc, d, rat(1), rat(0));
    CHECK(id.annihilator() == d.annihilator());
    CHECK(id.span() == d.span());

    // applying (0, 1) twice negates both presentations
    Distribution jj = transform_distribution(
        dc, transform_distribution(dc, d, rat(0), rat(1)), rat(0), rat(1));
    REQUIRE(jj.annihilator().size() == d.annihilator().size());
    for (std::size_t i = 0; i < d.annihilator().size(); ++i)
        CHECK(jj.annihilator()[i] == -d.annihilator()[i]);
    for (std::size_t i = 0; i < d.span().size(); ++i)
        CHECK(jj.span()[i] == -d.span()[i]);

    // (1, t) then (1, -t) rescales every span field by 1 + t^2
    const Rat t = rat(2);
    Distribution back = transform_distribution(
        dc, transform_distribution(dc, d, rat(1), t), rat(1), -t);
    const Rat scale = rat(1) + t * t;
    for (std::size_t i = 0; i < d.span().size(); ++i)
        CHECK(back.span()[i] == scale * d.span()[i]);
    for (std::size_t i = 0; i < d.annihilator().size(); ++i)
        CHECK(back.annihilator()[i] == scale * d.annihilator()[i]);

    CHECK_THROWS_AS(transform_distribution(dc, d, rat(0), rat(0)), PreconditionError);

    // rank preserved for arbitrary nonzero (a, b)
    DetRng rng(43);
    for (int it = 0; it < 10; ++it) {
        Rat ra = rng.small_rat(4, 2), rb = rng.small_rat(4, 2);
        if (ra == 0 && rb == 0) rb = 1;
        CHECK(transform_distribution(dc, d, ra, rb).rank() == d.rank());
    }
}

TEST_CASE("core distribution from anchors") {
    VeroneseCurve flat11 = flat_curve(1, 1);
    DoubledChart dc = DoubledChart::make(flat11.chart());
    std::vector<ProjPoint> anchors{fin(0), fin(1), fin(2)};
    Distribution f = build_core_distribution(dc, flat11, anchors);

    // annihilator listed anchor by anchor
    auto dx = [&](std::size_t i) { return DForm::covector(dc.doubled, i); };
    REQUIRE(f.annihilator().size() == 3);
    CHECK(f.annihilator()[0] == dx(0));
    CHECK(f.annihilator()[1] == dx(0) + dx(1) + dx(2) + dx(3));
    CHECK(f.annihilator()[2] ==
          dx(0) + rat(2) * dx(1) + rat(2) * dx(2) + rat(4) * dx(3));

    REQUIRE(f.rank() == 1);
    VectorField expected(dc.doubled,
                         {Poly::zero(dc.doubled), Poly::constant(dc.doubled, rat(1)),
                          Poly::constant(dc.doubled, rat(-1)), Poly::zero(dc.doubled)});
    CHECK(f.span()[0] == expected);

    // independent reference solve of the same constant system
    std::vector<std::vector<Rat>> rows;
    for (const auto& w : f.annihilator()) {
        std::vector<Rat> row;
        for (const auto& p : w.one_form_coeffs()) row.push_back(p.constant_value());
        rows.push_back(std::move(row));
    }
    auto ref = oracle::rat_kernel_ref(rows, 4);
    REQUIRE(ref.size() == 1);
    std::vector<Rat> got;
    for (const auto& p : f.span()[0].components()) got.push_back(p.constant_value());
    std::vector<std::vector<Rat>> span_cmp{ref[0], got};
    CHECK(rat_rank(span_cmp) == 1);

    VeroneseCurve flat12 = flat_curve(1, 2);
    CHECK(build_core_distribution(DoubledChart::make(flat12.chart()), flat12,
                                  {fin(0), fin(1), fin(2), fin(3)})
              .rank() == 2);
    VeroneseCurve flat21 = flat_curve(2, 1);
    CHECK(build_core_distribution(DoubledChart::make(flat21.chart()), flat21,
                                  {fin(0), fin(1), fin(2)})
              .rank() == 2);

    CHECK_THROWS_AS(build_core_distribution(dc, flat11, {fin(0), fin(0), fin(1)}),
                    PreconditionError);
    CHECK_THROWS_AS(build_core_distribution(dc, flat11, {fin(0), fin(1)}),
                    PreconditionError);
    CHECK_THROWS_AS(
        build_core_distribution(dc, flat11, {fin(0), fin(1), ProjPoint::infinity()}),
        PreconditionError);
    // integrability at every anchor is a precondition, named in the error
    VeroneseCurve pert = perturbed_curve();
    DoubledChart dcp = DoubledChart::make(pert.chart());
    bool threw = false;
    try {
        build_core_distribution(dcp, pert, {fin(0), fin(1), fin(2), fin(3)});
    } catch (const PreconditionError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("anchor 2") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("exact and pointwise frobenius criteria") {
    auto c3 = make_coordinate_chart("c", 3);
    Poly x0 = Poly::variable(c3, 0), x1 = Poly::variable(c3, 1);

    CHECK(frobenius_ann(Distribution::from_annihilator(c3, {DForm::covector(c3, 0)},
                                                       origin(3))));

    // contact form: d(alpha) ^ alpha = dx0 ^ dx1 ^ dx2 != 0
    DForm contact = DForm::covector(c3, 2) - x1 * DForm::covector(c3, 0);
    Distribution dcont = Distribution::from_annihilator(c3, {contact}, origin(3));
    CHECK_FALSE(frobenius_ann(dcont));
    DForm obstruction = wedge(exterior_d(contact), contact);
    DForm vol(c3, 3);
    vol.add_term({0, 1, 2}, Poly::constant(c3, rat(1)));
    CHECK(obstruction == vol);

    // core distributions of flat curves are cut out by constant forms
    for (auto [k, n] : {std::pair<unsigned, unsigned>{1, 1}, {1, 2}, {2, 1}}) {
        VeroneseCurve c = flat_curve(k, n);
        DoubledChart dc = DoubledChart::make(c.chart());
        std::vector<ProjPoint> anchors;
        for (unsigned j = 0; j < n + 2; ++j) anchors.push_back(fin(j));
        CHECK(frobenius_ann(build_core_distribution(dc, c, anchors)));
    }

    // pointwise bracket-closure criterion
    Distribution flat2 = Distribution::from_span(
        c3, {VectorField::basis(c3, 0), VectorField::basis(c3, 1)}, origin(3));
    CHECK(frobenius_span(flat2, default_sample_points(c3, flat2.basepoint(), 7)));

    VectorField tw = VectorField::basis(c3, 1) + x0 * VectorField::basis(c3, 2);
    Distribution twisted =
        Distribution::from_span(c3, {VectorField::basis(c3, 0), tw}, origin(3));
    CHECK_FALSE(frobenius_span(twisted, default_sample_points(c3, twisted.basepoint(), 7)));

    // annihilator dependent at the basepoint is rejected
    Distribution degen(c3, {DForm::covector(c3, 0), x0 * DForm::covector(c3, 0)},
                       {VectorField::basis(c3, 1), VectorField::basis(c3, 2)}, origin(3));
    CHECK_THROWS_AS(frobenius_ann(degen), PreconditionError);

    // the two criteria agree on randomized polynomial distributions
    auto c4 = make_coordinate_chart("r", 4);
    DetRng rng(44);
    int involutive = 0, twisted_count = 0;
    for (int it = 0; it < 50; ++it) {
        const unsigned r = 1 + static_cast<unsigned>(rng.below(2));
        std::vector<DForm> ann;
        for (unsigned i = 0; i < r; ++i) {
            DForm a = DForm::covector(c4, i);
            for (std::size_t j = r; j < 4; ++j)
                a += oracle::random_poly(rng, c4, 2, 2) * DForm::covector(c4, j);
            ann.push_back(a);
        }
        Distribution d = Distribution::from_annihilator(c4, ann, origin(4));
        const bool exact = frobenius_ann(d);
        const bool sampled =
            frobenius_span(d, default_sample_points(c4, d.basepoint(), 100 + it));
        CHECK(exact == sampled);
        (exact ? involutive : twisted_count)++;
    }
    CHECK(involutive > 0);
    CHECK(twisted_count > 0);
}

TEST_CASE("rotation family integrability") {
    // a constant line field rotates to a line field for every t
    auto b2 = make_coordinate_chart("b", 2);
    DoubledChart dc2 = DoubledChart::make(b2);
    Distribution line = Distribution::from_span(
        dc2.doubled, {VectorField::basis(dc2.doubled, 1)}, origin(4));
    std::vector<ProjPoint> ts{fin(0), fin(1), fin(-1), fin(3), ProjPoint::infinity()};
    RotationReport r1 = rotation_family_check(dc2, line, ts);
    CHECK(r1.hypotheses_ok());
    CHECK(r1.all_ok());
    REQUIRE(r1.per_t.size() == ts.size());
    for (const auto& pc : r1.per_t) CHECK(pc.ok);

    // the core distribution of a flat curve stays integrable under rotation
    VeroneseCurve flat11 = flat_curve(1, 1);
    DoubledChart dcf = DoubledChart::make(flat11.chart());
    Distribution f = build_core_distribution(dcf, flat11, {fin(0), fin(1), fin(2)});
    RotationReport r2 = rotation_family_check(dcf, f, ts);
    CHECK(r2.all_ok());

    // hypothesis failure: the rotated image of an integrable plane field
    // need not be integrable, and this is reported before any t is tried
    auto b3 = make_coordinate_chart("c", 3);
    DoubledChart dc3 = DoubledChart::make(b3);
    Poly y0 = Poly::variable(dc3.doubled, 3);
    VectorField v2 = VectorField::basis(dc3.doubled, 1) + y0 * VectorField::basis(dc3.doubled, 2);
    Distribution d = Distribution::from_span(
        dc3.doubled, {VectorField::basis(dc3.doubled, 0), v2}, origin(6));
    RotationReport r3 = rotation_family_check(dc3, d, ts);
    CHECK(r3.hyp_d_ok);
    CHECK_FALSE(r3.hyp_jd_ok);
    CHECK_FALSE(r3.hypotheses_ok());
    CHECK_FALSE(r3.all_ok());
    CHECK(r3.per_t.empty());

    // a line field can never trigger the hypothesis failure: both it and
    // its rotated images have rank one, which is always integrable
    Poly x1 = Poly::variable(dc3.doubled, 1);
    VectorField lv = VectorField::basis(dc3.doubled, 1) + x1 * VectorField::basis(dc3.doubled, 2);
    Distribution dl = Distribution::from_span(dc3.doubled, {lv}, origin(6));
    RotationReport r4 = rotation_family_check(dc3, dl, ts);
    CHECK(r4.hypotheses_ok());
    CHECK(r4.all_ok());
}

TEST_CASE("bracket compatibility of the complex structure") {
    auto base = make_coordinate_chart("b", 2);
    DoubledChart dc = DoubledChart::make(base);

    CHECK(nijenhuis_check(dc, VectorField::basis(dc.doubled, 0),
                          VectorField::basis(dc.doubled, 1)));
    Poly x0 = Poly::variable(dc.doubled, 0);
    CHECK(nijenhuis_check(dc, x0 * VectorField::basis(dc.doubled, 1),
                          VectorField::basis(dc.doubled, 0)));

    DetRng rng(45);
    for (int it = 0; it < 20; ++it) {
        std::vector<Poly> vc, wc;
        for (std::size_t i = 0; i < 4; ++i) {
            vc.push_back(oracle::random_poly(rng, dc.doubled, 2, 3));
            wc.push_back(oracle::random_poly(rng, dc.doubled, 2, 3));
        }
        CHECK(nijenhuis_check(dc, VectorField(dc.doubled, vc), VectorField(dc.doubled, wc)));
    }
}

TEST_CASE("full verification on flat curves") {
    VeroneseCurve flat11 = flat_curve(1, 1);
    std::vector<ProjPoint> anchors{fin(0), fin(1), fin(2)};
    std::vector<ProjPoint> ts{fin(0), fin(1), fin(-1), fin(5), ProjPoint::infinity()};
    ComplexifyReport rep = check_complexification(flat11, anchors, ts);
    CHECK(rep.rank_f == 1);
    CHECK(rep.redundancy_ok);
    CHECK(rep.all_pass());
    for (const auto& item : rep.items) {
        REQUIRE(item.size() == ts.size());
        for (const auto& ic : item) {
            CHECK(ic.ok);
            CHECK(ic.witness.empty());
        }
    }

    // the projected rotated span recovers the member distribution
    DoubledChart dc = DoubledChart::make(flat11.chart());
    Distribution f = build_core_distribution(dc, flat11, anchors);
    Distribution minus5 = transform_distribution(dc, f, rat(1), rat(-5));
    REQUIRE(minus5.span().size() == 1);
    VectorField proj = dc.project_field(minus5.span()[0]);
    VectorField expected = VectorField::basis(flat11.chart(), 1) -
                           rat(5) * VectorField::basis(flat11.chart(), 0);
    CHECK(proj == expected);
    DForm member5 = flat11.pencil(0).eval(fin(5));
    CHECK(contract(member5, proj).coeff({}).is_zero());

    ComplexifyReport rep12 = check_complexification(
        flat_curve(1, 2), {fin(0), fin(1), fin(2), fin(3)},
        {fin(0), fin(2), ProjPoint::infinity()});
    CHECK(rep12.rank_f == 2);
    CHECK(rep12.all_pass());

    ComplexifyReport rep21 = check_complexification(
        flat_curve(2, 1), {fin(0), fin(1), fin(2)},
        {fin(0), fin(1), ProjPoint::infinity()});
    CHECK(rep21.rank_f == 2);
    CHECK(rep21.all_pass());
}

TEST_CASE("chart dependence of the core construction") {
    VeroneseCurve sheared = sheared_curve();
    // the curve itself is integrable everywhere (every member is exact)
    CHECK(check_full(sheared).verdict == Verdict::IntegrableEverywhere);

    std::vector<ProjPoint> ts{fin(0), fin(1), fin(2), ProjPoint::infinity()};
    ComplexifyReport rep =
        check_complexification(sheared, {fin(0), fin(1), fin(2), fin(3)}, ts);

    // rank, projectability and projection identity are insensitive to the
    // chart; integrability of the rotated family is not, and fails here
    // because the members are not cut out by affine functions
    CHECK(rep.rank_f == 2);
    CHECK(rep.redundancy_ok);
    CHECK_FALSE(rep.all_pass());
    CHECK_FALSE(rep.items[0][0].ok);
    CHECK_FALSE(rep.items[0][0].witness.empty());
    for (std::size_t i : {std::size_t(1), std::size_t(2), std::size_t(3)})
        for (const auto& ic : rep.items[i]) CHECK(ic.ok);

    // the same family expressed over its flat model passes everything
    ComplexifyReport flat_rep = check_complexification(
        flat_curve(1, 2), {fin(0), fin(1), fin(2), fin(3)}, ts);
    CHECK(flat_rep.all_pass());
}
