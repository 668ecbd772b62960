#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "vweb/binform.hpp"
#include "vweb/pencil.hpp"

using namespace vweb;

namespace {

ChartPtr chart2() { return make_coordinate_chart("c2", 2); }

// flat degree-1 pencil dx0 + t dx1
FormPencil flat_line(const ChartPtr& c) {
    return FormPencil(c, 1, {DForm::covector(c, 0), DForm::covector(c, 1)});
}

FormPencil random_pencil(DetRng& rng, const ChartPtr& c, unsigned param_degree) {
    std::vector<DForm> coeffs;
    for (unsigned j = 0; j <= param_degree; ++j) {
        std::vector<Poly> cs;
        for (std::size_t i = 0; i < c->dim(); ++i)
            cs.push_back(oracle::random_poly(rng, c, 2, 2));
        coeffs.push_back(DForm::one_form(c, cs));
    }
    return FormPencil(c, 1, std::move(coeffs));
}

Rat brat(long n, long d = 1) { return rat(n, d); }

} // namespace

TEST_CASE("projective points canonicalize, parse and compare") {
    CHECK(ProjPoint::finite(rat(3, 2)) == ProjPoint::from_coords(rat(2), rat(3)));
    CHECK(ProjPoint::infinity() == ProjPoint::from_coords(rat(0), rat(-5)));
    CHECK(ProjPoint::parse("3/2").value() == rat(3, 2));
    CHECK(ProjPoint::parse("-1").value() == rat(-1));
    CHECK(ProjPoint::parse("inf").is_infinity());
    CHECK(ProjPoint::parse("inf").str() == "inf");
    CHECK(ProjPoint::parse("-4/6").str() == "-2/3");
    CHECK_THROWS_AS(ProjPoint::from_coords(rat(0), rat(0)), PreconditionError);
    CHECK_THROWS_AS(ProjPoint::parse("oo"), ParseError);
    CHECK_THROWS_AS(ProjPoint::infinity().value(), PreconditionError);
    CHECK(all_distinct({ProjPoint::finite(rat(0)), ProjPoint::infinity()}));
    CHECK_FALSE(all_distinct({ProjPoint::finite(rat(1, 2)), ProjPoint::finite(rat(2, 4))}));
}

TEST_CASE("moebius maps act projectively") {
    // (s,t) -> (s, s+t) is the affine translation t -> t+1
    const Moebius g = Moebius::of(brat(1), brat(0), brat(1), brat(1));
    CHECK(g.apply(ProjPoint::finite(rat(1))) == ProjPoint::finite(rat(2)));
    CHECK(g.apply(ProjPoint::infinity()) == ProjPoint::infinity());
    // (s,t) -> (s+t, t) is u -> u/(1+u), sending infinity to 1
    const Moebius h0 = Moebius::of(brat(1), brat(1), brat(0), brat(1));
    CHECK(h0.apply(ProjPoint::infinity()) == ProjPoint::finite(rat(1)));
    CHECK(h0.apply(ProjPoint::finite(rat(1))) == ProjPoint::finite(rat(1, 2)));

    const Moebius swap = Moebius::of(brat(0), brat(1), brat(1), brat(0));
    CHECK(swap.apply(ProjPoint::finite(rat(2))) == ProjPoint::finite(rat(1, 2)));
    CHECK(swap.apply(ProjPoint::finite(rat(0))) == ProjPoint::infinity());
    CHECK(swap.apply(ProjPoint::infinity()) == ProjPoint::finite(rat(0)));

    CHECK_THROWS_AS(Moebius::of(brat(1), brat(2), brat(2), brat(4)), PreconditionError);

    DetRng rng(31);
    for (int i = 0; i < 50; ++i) {
        Moebius h{rng.small_rat(5, 2), rng.small_rat(5, 2), rng.small_rat(5, 2),
                  rng.small_rat(5, 2)};
        if (h.det() == 0) continue;
        ProjPoint p = rng.below(6) == 0 ? ProjPoint::infinity()
                                        : ProjPoint::finite(rng.small_rat(6, 3));
        CHECK(h.inverse().apply(h.apply(p)) == p);
        Moebius k{rng.small_rat(5, 2), rng.small_rat(5, 2), rng.small_rat(5, 2),
                  rng.small_rat(5, 2)};
        if (k.det() == 0) continue;
        CHECK(h.compose(k).apply(p) == k.apply(h.apply(p)));
    }
}

TEST_CASE("pencil evaluation at canonical points") {
    auto c = chart2();
    FormPencil p = flat_line(c);
    CHECK(p.eval(ProjPoint::finite(rat(0))) == DForm::covector(c, 0));
    CHECK(p.eval(ProjPoint::infinity()) == DForm::covector(c, 1));
    DForm at2 = p.eval(ProjPoint::finite(rat(2)));
    CHECK(at2 == DForm::covector(c, 0) + rat(2) * DForm::covector(c, 1));
    CHECK_FALSE(p.is_zero());
    CHECK(FormPencil::zero(c, 1, 3).is_zero());
}

TEST_CASE("pencil wedge and derivative") {
    auto c = chart2();
    FormPencil p = flat_line(c);
    // p ^ p = 0 coefficientwise: s t (dx0^dx1 + dx1^dx0) cancels
    CHECK(pencil_wedge(p, p).is_zero());
    // d of a constant-coefficient pencil vanishes
    CHECK(pencil_d(p).is_zero());

    // q(t) = x1 dx0 + t x0 dx1: dq = dx1^dx0 + t dx0^dx1
    Poly x0 = Poly::variable(c, 0), x1 = Poly::variable(c, 1);
    FormPencil q(c, 1, {x1 * DForm::covector(c, 0), x0 * DForm::covector(c, 1)});
    FormPencil dq = pencil_d(q);
    CHECK(dq.coeff(0).coeff({0, 1}) == Poly::constant(c, rat(-1)));
    CHECK(dq.coeff(1).coeff({0, 1}) == Poly::constant(c, rat(1)));

    // wedge degree arithmetic
    FormPencil pq = pencil_wedge(p, q);
    CHECK(pq.param_degree() == 2);
    CHECK(pq.form_degree() == 2);

    DetRng rng(55);
    for (int i = 0; i < 30; ++i) {
        FormPencil a = random_pencil(rng, c, 1);
        FormPencil b = random_pencil(rng, c, 2);
        // evaluation commutes with wedge at finite points and infinity
        for (const ProjPoint& pt :
             {ProjPoint::finite(rng.small_rat(5, 2)), ProjPoint::infinity()}) {
            CHECK(pencil_wedge(a, b).eval(pt) == wedge(a.eval(pt), b.eval(pt)));
            CHECK(pencil_d(a).eval(pt) == exterior_d(a.eval(pt)));
        }
    }
}

TEST_CASE("moebius transform frozen examples") {
    auto c = chart2();
    FormPencil p = flat_line(c);

    CHECK(moebius_transform(p, Moebius::identity()) == p);

    // swap reverses the coefficient list
    const Moebius swap = Moebius::of(brat(0), brat(1), brat(1), brat(0));
    FormPencil rev = moebius_transform(p, swap);
    CHECK(rev.coeff(0) == DForm::covector(c, 1));
    CHECK(rev.coeff(1) == DForm::covector(c, 0));

    // shear (s,t) -> (s, t+s) on dx0 + t dx1 gives (dx0 + dx1) + t dx1
    const Moebius shear = Moebius::of(brat(1), brat(0), brat(1), brat(1));
    FormPencil sh = moebius_transform(p, shear);
    CHECK(sh.coeff(0) == DForm::covector(c, 0) + DForm::covector(c, 1));
    CHECK(sh.coeff(1) == DForm::covector(c, 1));
}

TEST_CASE("moebius transform is equivariant with evaluation") {
    auto c = chart2();
    DetRng rng(66);
    for (int i = 0; i < 60; ++i) {
        FormPencil p = random_pencil(rng, c, static_cast<unsigned>(rng.below(3) + 1));
        Moebius g{rng.small_rat(4, 2), rng.small_rat(4, 2), rng.small_rat(4, 2),
                  rng.small_rat(4, 2)};
        if (g.det() == 0) continue;
        FormPencil tp = moebius_transform(p, g);
        ProjPoint q = rng.below(5) == 0 ? ProjPoint::infinity()
                                        : ProjPoint::finite(rng.small_rat(5, 2));
        // P(g . (s,t)) at q equals P at g(q), up to the homogeneity factor
        const Rat hs = g.a * q.s + g.b * q.t;
        const Rat ht = g.c * q.s + g.d * q.t;
        const Rat lambda = hs != 0 ? hs : ht;
        CHECK(tp.eval(q) == rat_pow(lambda, p.param_degree()) * p.eval(g.apply(q)));
        // functoriality: transforming by g then h matches the composite
        Moebius h{rng.small_rat(4, 2), rng.small_rat(4, 2), rng.small_rat(4, 2),
                  rng.small_rat(4, 2)};
        if (h.det() == 0) continue;
        CHECK(moebius_transform(tp, h) == moebius_transform(p, h.compose(g)));
        // transform commutes with wedge and d
        FormPencil b = random_pencil(rng, c, 1);
        CHECK(moebius_transform(pencil_wedge(p, b), g) ==
              pencil_wedge(tp, moebius_transform(b, g)));
        CHECK(moebius_transform(pencil_d(p), g) == pencil_d(tp));
    }
}

TEST_CASE("a degree-n pencil vanishing at n+1 points is zero") {
    auto c = chart2();
    DetRng rng(88);
    for (int trial = 0; trial < 30; ++trial) {
        const unsigned n = static_cast<unsigned>(rng.below(3) + 1);
        FormPencil p = random_pencil(rng, c, n);
        if (p.is_zero()) continue;
        // a nonzero pencil cannot vanish at n+1 distinct points
        std::vector<ProjPoint> pts;
        for (long v = 0; pts.size() < n + 1; ++v) pts.push_back(ProjPoint::finite(rat(v)));
        unsigned zeros = 0;
        for (const auto& pt : pts)
            if (p.eval(pt).is_zero()) ++zeros;
        CHECK(zeros < n + 1);
    }
}

TEST_CASE("binary form gcd") {
    // (s - t)(s - 2t) and (s - t) s
    BinForm a({brat(2), brat(-3), brat(1)});
    // s^2 - s t = s(s - t): coefficients (1, -1, 0)
    BinForm b({brat(1), brat(-1), brat(0)});
    BinForm g = binform_gcd(a, b);
    // expect s - t
    CHECK(g.degree() == 1);
    CHECK(g.eval(brat(1), brat(1)) == 0);
    CHECK(g.eval(brat(1), brat(0)) != 0);

    CHECK(binform_gcd(BinForm::zero(2), a) == a);
    CHECK(binform_gcd(BinForm::zero(1), BinForm::zero(3)).is_zero());

    // coprime forms have constant gcd
    BinForm c1({brat(1), brat(0)});  // s
    BinForm c2({brat(0), brat(1)});  // t
    CHECK(binform_gcd(c1, c2).degree() == 0);
}

TEST_CASE("binary form rational roots") {
    // s t (s - 2t): roots 0, inf, 1/2... coefficients of s^2 t - 2 s t^2:
    // degree 3: c = (0, 1, -2, 0)
    BinForm f({brat(0), brat(1), brat(-2), brat(0)});
    BinRoots r = binform_rational_roots(f);
    REQUIRE(r.rational.size() == 3);
    CHECK(r.rational[0] == ProjPoint::infinity());
    CHECK(r.rational[1] == ProjPoint::finite(rat(0)));
    CHECK(r.rational[2] == ProjPoint::finite(rat(1, 2)));
    CHECK(r.residual_degree == 0);

    // s^2 + t^2 has no rational roots
    BinForm g({brat(1), brat(0), brat(1)});
    BinRoots rg = binform_rational_roots(g);
    CHECK(rg.rational.empty());
    CHECK(rg.residual_degree == 2);

    // (t - 3s)^2 (t^2 + s^2): double root 3 plus residual quadratic
    // (t-3s)^2 = t^2 - 6 s t + 9 s^2
    BinForm h1({brat(9), brat(-6), brat(1)});
    BinForm h2({brat(1), brat(0), brat(1)});
    std::vector<Rat> prod(5, brat(0));
    for (unsigned i = 0; i <= 2; ++i)
        for (unsigned j = 0; j <= 2; ++j) prod[i + j] += h1.c[i] * h2.c[j];
    BinRoots rh = binform_rational_roots(BinForm(prod));
    REQUIRE(rh.rational.size() == 1);
    CHECK(rh.rational[0] == ProjPoint::finite(rat(3)));
    CHECK(rh.residual_degree == 2);

    CHECK_THROWS_AS(binform_rational_roots(BinForm::zero(2)), PreconditionError);

    DetRng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        // build a form from known roots and a rootless factor, then recover
        std::vector<Rat> roots;
        for (int i = 0; i < 3; ++i) roots.push_back(rng.small_rat(4, 2));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        std::vector<Rat> coeffs{brat(1)};
        for (const auto& r0 : roots) {
            // multiply by (t - r0 s)
            std::vector<Rat> next(coeffs.size() + 1, brat(0));
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                next[i] -= r0 * coeffs[i];
                next[i + 1] += coeffs[i];
            }
            coeffs = std::move(next);
        }
        BinRoots rec = binform_rational_roots(BinForm(coeffs));
        REQUIRE(rec.rational.size() == roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i) {
            CHECK_FALSE(rec.rational[i].is_infinity());
            CHECK(rec.rational[i].value() == roots[i]);
        }
        CHECK(rec.residual_degree == 0);
    }
}
