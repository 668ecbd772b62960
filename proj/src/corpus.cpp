#include "vweb/corpus.hpp"

#include <algorithm>
#include <set>

#include "vweb/error.hpp"
#include "vweb/json_io.hpp"
#include "vweb/rng.hpp"

namespace vweb {

namespace {

Rat rat_det(std::vector<std::vector<Rat>> m) {
    const std::size_t n = m.size();
    Rat det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            const Rat f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

GroundTruth derive_manifest(const VeroneseCurve& base, const char* who, std::uint64_t seed) {
    if (!base.manifest())
        throw PreconditionError(std::string(who) + ": base curve carries no manifest");
    GroundTruth g = *base.manifest();
    g.generator = who;
    g.seed = seed;
    return g;
}

// d(images[idx]) expanded over the chart covectors, with the coefficient
// polynomials moved through the substitution.
DForm pull_one_form(const DForm& w, const ChartPtr& chart, const std::vector<Poly>& images) {
    DForm out(chart, 1);
    for (const auto& [idx, p] : w.terms()) {
        const Poly moved = p.subst(chart, images);
        const Poly& image = images[idx[0]];
        for (std::size_t l = 0; l < chart->dim(); ++l) {
            Poly d = image.partial(l);
            if (d.is_zero()) continue;
            out.add_term({static_cast<std::uint32_t>(l)}, moved * d);
        }
    }
    return out;
}

Poly small_poly(DetRng& rng, const ChartPtr& chart, unsigned max_degree, unsigned max_terms) {
    Poly p(chart);
    const auto nterms = static_cast<unsigned>(rng.below(max_terms + 1));
    for (unsigned t = 0; t < nterms; ++t) {
        Monomial mono(chart->dim(), 0);
        const auto budget =
            max_degree == 0 ? 0u : static_cast<unsigned>(rng.below(max_degree + 1));
        for (unsigned d = 0; d < budget; ++d) mono[rng.below(chart->dim())] += 1;
        p.add_term(mono, rng.small_rat(5, 2));
    }
    return p;
}

} // namespace

VeroneseCurve gen_flat(unsigned k, unsigned n) {
    if (k == 0 || n == 0) throw PreconditionError("flat family needs k >= 1 and n >= 1");
    const unsigned m = k * (n + 1);
    std::vector<std::string> vars;
    vars.reserve(m);
    for (unsigned i = 0; i < m; ++i) vars.push_back("x" + std::to_string(i));
    auto chart = make_chart("curve", std::move(vars));
    std::vector<FormPencil> pencils;
    std::vector<std::vector<Poly>> integrals;
    for (unsigned i = 0; i < k; ++i) {
        std::vector<DForm> coeffs;
        std::vector<Poly> group;
        for (unsigned j = 0; j <= n; ++j) {
            coeffs.push_back(DForm::covector(chart, i * (n + 1) + j));
            group.push_back(Poly::variable(chart, i * (n + 1) + j));
        }
        pencils.emplace_back(chart, 1, std::move(coeffs));
        integrals.push_back(std::move(group));
    }
    GroundTruth g;
    g.generator = "flat";
    g.locus_all = true;
    g.adapted_chart = true;
    g.first_integrals = std::move(integrals);
    return VeroneseCurve(k, n, chart, std::move(pencils), std::vector<Rat>(m, Rat(0)),
                         std::move(g));
}

VeroneseCurve gen_rescaled(const VeroneseCurve& base, std::vector<std::vector<Poly>> scale,
                           std::uint64_t seed) {
    const unsigned k = base.k();
    const auto& chart = base.chart();
    if (scale.size() != k) throw PreconditionError("rescaling matrix must be k x k");
    for (const auto& row : scale) {
        if (row.size() != k) throw PreconditionError("rescaling matrix must be k x k");
        for (const auto& entry : row) require_same_chart(chart, entry.chart(), "rescaling entry");
    }
    std::vector<std::vector<Rat>> at_bp(k, std::vector<Rat>(k));
    for (unsigned i = 0; i < k; ++i)
        for (unsigned j = 0; j < k; ++j) at_bp[i][j] = scale[i][j].eval(base.basepoint());
    if (rat_det(std::move(at_bp)) == 0)
        throw PreconditionError("rescaling matrix is singular at the basepoint");

    std::vector<FormPencil> pencils;
    for (unsigned i = 0; i < k; ++i) {
        std::vector<DForm> coeffs;
        for (unsigned d = 0; d <= base.n(); ++d) {
            DForm w = DForm::zero(chart, 1);
            for (unsigned j = 0; j < k; ++j) {
                if (scale[i][j].is_zero()) continue;
                w += scale[i][j] * base.pencil(j).coeff(d);
            }
            coeffs.push_back(std::move(w));
        }
        pencils.emplace_back(chart, 1, std::move(coeffs));
    }
    // an invertible rescale keeps every member distribution, hence the
    // locus, the first integrals and the adaptation flag
    GroundTruth g = derive_manifest(base, "rescaled", seed);
    return VeroneseCurve(k, base.n(), chart, std::move(pencils), base.basepoint(),
                         std::move(g));
}

VeroneseCurve gen_pullback(const VeroneseCurve& base, std::vector<Poly> images,
                           std::uint64_t seed) {
    const auto& chart = base.chart();
    const unsigned m = base.m();
    if (images.size() != m)
        throw PreconditionError("substitution needs one image per chart variable");
    for (const auto& img : images) require_same_chart(chart, img.chart(), "substitution image");
    for (unsigned i = 0; i < m; ++i) {
        const Poly q = images[i] - Poly::variable(chart, i);
        for (const auto& [mono, coeff] : q.terms()) {
            (void)coeff;
            for (unsigned l = 0; l <= i; ++l)
                if (mono[l] != 0)
                    throw PreconditionError(
                        "substitution is not triangular: image of variable " +
                        std::to_string(i) + " involves variable " + std::to_string(l));
        }
    }

    // invert by back substitution, last variable first
    std::vector<Poly> inverse(m, Poly::zero(chart));
    for (unsigned step = 0; step < m; ++step) {
        const unsigned i = m - 1 - step;
        std::vector<Poly> sub;
        sub.reserve(m);
        for (unsigned l = 0; l < m; ++l)
            sub.push_back(l > i ? inverse[l] : Poly::variable(chart, l));
        const Poly shift = images[i] - Poly::variable(chart, i);
        inverse[i] = Poly::variable(chart, i) - shift.subst(chart, sub);
    }
    for (unsigned i = 0; i < m; ++i)
        if (images[i].subst(chart, inverse) != Poly::variable(chart, i))
            throw StructuralError("substitution inverse check failed");

    std::vector<FormPencil> pencils;
    for (unsigned i = 0; i < base.k(); ++i) {
        std::vector<DForm> coeffs;
        for (unsigned d = 0; d <= base.n(); ++d)
            coeffs.push_back(pull_one_form(base.pencil(i).coeff(d), chart, images));
        pencils.emplace_back(chart, 1, std::move(coeffs));
    }

    std::vector<Rat> basepoint;
    basepoint.reserve(m);
    for (unsigned i = 0; i < m; ++i) basepoint.push_back(inverse[i].eval(base.basepoint()));

    GroundTruth g = derive_manifest(base, "pullback", seed);
    g.adapted_chart = false;
    if (g.first_integrals)
        for (auto& group : *g.first_integrals)
            for (auto& p : group) p = p.subst(chart, images);
    if (g.adapted_chart_map) {
        std::vector<Poly> composed;
        composed.reserve(m);
        for (unsigned i = 0; i < m; ++i)
            composed.push_back(inverse[i].subst(chart, *g.adapted_chart_map));
        g.adapted_chart_map = std::move(composed);
    } else {
        g.adapted_chart_map = inverse;
    }
    return VeroneseCurve(base.k(), base.n(), chart, std::move(pencils), std::move(basepoint),
                         std::move(g));
}

VeroneseCurve gen_moebius(const VeroneseCurve& base, const Moebius& g, std::uint64_t seed) {
    if (g.det() == 0) throw PreconditionError("singular parameter substitution");
    std::vector<FormPencil> pencils;
    for (unsigned i = 0; i < base.k(); ++i)
        pencils.push_back(moebius_transform(base.pencil(i), g));
    GroundTruth truth = derive_manifest(base, "moebius", seed);
    if (!truth.locus_all) {
        const Moebius back = g.inverse();
        for (auto& p : truth.locus) p = back.apply(p);
    }
    truth.param_map = g.compose(truth.param_map);
    return VeroneseCurve(base.k(), base.n(), base.chart(), std::move(pencils),
                         base.basepoint(), std::move(truth));
}

VeroneseCurve gen_perturbed(const VeroneseCurve& base, const std::vector<ProjPoint>& roots,
                            unsigned pencil, const DForm& beta, std::uint64_t seed) {
    const unsigned n = base.n();
    const unsigned m = base.m();
    const auto& chart = base.chart();
    if (roots.empty() || roots.size() > n)
        throw PreconditionError("perturbation needs between 1 and n vanishing points");
    if (!all_distinct(roots)) throw PreconditionError("duplicate vanishing points");
    for (const auto& r : roots)
        if (r.is_infinity()) throw PreconditionError("vanishing points must be finite");
    if (pencil >= base.k()) throw PreconditionError("pencil index out of range");
    if (beta.degree() != 1) throw PreconditionError("perturbation must be a 1-form");
    require_same_chart(chart, beta.chart(), "perturbation form");

    // p(s, t) = s^(n - r) * prod (t - a_j s): expand the product in t
    std::vector<Rat> prod{Rat(1)};
    for (const auto& r : roots) {
        std::vector<Rat> next(prod.size() + 1, Rat(0));
        for (std::size_t i = 0; i < prod.size(); ++i) {
            next[i + 1] += prod[i];
            next[i] -= r.value() * prod[i];
        }
        prod = std::move(next);
    }

    std::vector<FormPencil> pencils;
    for (unsigned i = 0; i < base.k(); ++i) {
        std::vector<DForm> coeffs;
        for (unsigned d = 0; d <= n; ++d) {
            DForm w = base.pencil(i).coeff(d);
            if (i == pencil && d < prod.size() && prod[d] != 0) w += prod[d] * beta;
            coeffs.push_back(std::move(w));
        }
        pencils.emplace_back(chart, 1, std::move(coeffs));
    }

    // keep the base basepoint when the coframe survives, otherwise shift
    // it deterministically from the seed
    VeroneseCurve probe = VeroneseCurve::make_unchecked(base.k(), n, chart, pencils,
                                                        base.basepoint());
    std::vector<Rat> basepoint = base.basepoint();
    if (!probe.coframe_at(basepoint)) {
        DetRng rng(seed);
        bool found = false;
        for (int attempt = 0; attempt < 16 && !found; ++attempt) {
            std::vector<Rat> cand;
            cand.reserve(m);
            for (unsigned i = 0; i < m; ++i) cand.push_back(rng.small_rat(3, 2));
            if (probe.coframe_at(cand)) {
                basepoint = std::move(cand);
                found = true;
            }
        }
        if (!found)
            throw InvalidCurveError(
                "perturbation degenerates the coframe at the basepoint and at every "
                "shifted candidate");
    }

    VeroneseCurve curve(base.k(), n, chart, std::move(pencils), std::move(basepoint));
    const Locus locus = integrability_locus(curve);
    if (!locus.all)
        for (const auto& r : roots)
            if (std::find(locus.points.begin(), locus.points.end(), r) == locus.points.end())
                throw PreconditionError("base curve is not integrable at vanishing point " +
                                        r.str());

    GroundTruth g;
    g.generator = "perturbed";
    g.seed = seed;
    g.locus_all = locus.all;
    g.locus = locus.points;
    g.residual = locus.residual;
    g.absorbed = locus.all;
    if (base.manifest()) g.param_map = base.manifest()->param_map;
    curve.set_manifest(std::move(g));
    return curve;
}

void check_ground_truth(const VeroneseCurve& c) {
    if (!c.manifest()) throw PreconditionError("curve carries no manifest");
    const GroundTruth& g = *c.manifest();
    if (!validate_coframe(c, c.basepoint()))
        throw StructuralError("corpus curve loses the coframe at its basepoint");
    if (g.locus_all) {
        if (check_full(c).verdict != Verdict::IntegrableEverywhere)
            throw StructuralError("curve declared integrable everywhere fails the full check");
        return;
    }
    for (const auto& p : g.locus)
        if (!check_at(c, p))
            throw StructuralError("declared locus point " + p.str() +
                                  " fails the pointwise check");
    if (g.locus.size() >= static_cast<std::size_t>(c.n()) + 3)
        throw StructuralError("declared locus violates the point-count bound");
    // the locus is exact: the first rational point outside it must fail
    for (long v = 0;; ++v) {
        const ProjPoint q = ProjPoint::finite(rat(v));
        if (std::find(g.locus.begin(), g.locus.end(), q) != g.locus.end()) continue;
        if (check_at(c, q))
            throw StructuralError("curve passes outside its declared locus at t = " + q.str());
        break;
    }
}

namespace {

std::vector<std::vector<Poly>> random_scale(DetRng& rng, const VeroneseCurve& base) {
    const unsigned k = base.k();
    const auto& chart = base.chart();
    std::vector<std::vector<Poly>> scale(k, std::vector<Poly>(k, Poly::zero(chart)));
    for (unsigned i = 0; i < k; ++i) {
        // unit diagonal entry: nonzero constant plus a part vanishing at
        // the basepoint, so the matrix stays triangular-invertible there
        Poly diag = Poly::constant(chart, rat(rng.range(1, 3)));
        Poly wobble = small_poly(rng, chart, 2, 2);
        diag += wobble - Poly::constant(chart, wobble.eval(base.basepoint()));
        scale[i][i] = std::move(diag);
        for (unsigned j = i + 1; j < k; ++j) scale[i][j] = small_poly(rng, chart, 1, 1);
    }
    return scale;
}

std::vector<Poly> random_shear(DetRng& rng, const VeroneseCurve& base) {
    const auto& chart = base.chart();
    const unsigned m = base.m();
    std::vector<Poly> images;
    images.reserve(m);
    for (unsigned i = 0; i < m; ++i) {
        Poly img = Poly::variable(chart, i);
        if (i + 1 < m) {
            const auto nterms = 1 + static_cast<unsigned>(rng.below(2));
            for (unsigned t = 0; t < nterms; ++t) {
                Monomial mono(m, 0);
                const auto deg = 1 + static_cast<unsigned>(rng.below(2));
                for (unsigned d = 0; d < deg; ++d) mono[i + 1 + rng.below(m - i - 1)] += 1;
                img.add_term(mono, rng.small_rat(2, 1));
            }
        }
        images.push_back(std::move(img));
    }
    return images;
}

Moebius random_moebius(DetRng& rng) {
    for (;;) {
        Moebius g{rat(rng.range(-2, 2)), rat(rng.range(-2, 2)), rat(rng.range(-2, 2)),
                  rat(rng.range(-2, 2))};
        if (g.det() != 0) return g;
    }
}

VeroneseCurve random_perturbed(DetRng& rng, const VeroneseCurve& flat, unsigned variant,
                               std::uint64_t seed) {
    const unsigned n = flat.n();
    const unsigned m = flat.m();
    const auto& chart = flat.chart();
    const unsigned count = 1 + variant % n;
    std::vector<ProjPoint> roots;
    while (roots.size() < count) {
        const ProjPoint cand = ProjPoint::finite(rat(rng.range(-3, 3)));
        if (std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
    }
    // beta with coefficients vanishing at the origin keeps the coframe
    DForm beta(chart, 1);
    const auto v = static_cast<std::uint32_t>(rng.below(m));
    const auto u = static_cast<std::uint32_t>((v + 1 + rng.below(m - 1)) % m);
    beta.add_term({v}, Poly::variable(chart, u));
    // a quadratic second term keeps beta from being closed by accident
    if (rng.below(2) == 1)
        beta.add_term({u}, rat(rng.range(1, 2)) * Poly::variable(chart, v) *
                               Poly::variable(chart, v));
    return gen_perturbed(flat, roots, variant % flat.k(), beta, seed);
}

} // namespace

std::vector<VeroneseCurve> standard_corpus(std::uint64_t seed) {
    std::vector<VeroneseCurve> out;
    std::uint64_t ordinal = 0;
    const auto next_seed = [&] { return seed * 256 + ordinal++; };
    for (unsigned k = 1; k <= 2; ++k) {
        for (unsigned n = 1; n <= 3; ++n) {
            DetRng rng(seed * 64 + k * 8 + n);
            const VeroneseCurve flat = gen_flat(k, n);
            ++ordinal;
            out.push_back(flat);
            for (int r = 0; r < 3; ++r)
                out.push_back(gen_rescaled(flat, random_scale(rng, flat), next_seed()));
            for (int r = 0; r < 3; ++r)
                out.push_back(gen_pullback(flat, random_shear(rng, flat), next_seed()));
            for (int r = 0; r < 3; ++r)
                out.push_back(gen_moebius(flat, random_moebius(rng), next_seed()));
            for (unsigned r = 0; r < 5; ++r)
                out.push_back(random_perturbed(rng, flat, r, next_seed()));
            // stacked transforms over fresh members of this shape; copies,
            // because the pushes below may reallocate the vector
            const VeroneseCurve perturbed = out[out.size() - 3];
            const VeroneseCurve pulled = out[out.size() - 9];
            const VeroneseCurve moved = out[out.size() - 6];
            out.push_back(gen_moebius(perturbed, random_moebius(rng), next_seed()));
            out.push_back(gen_rescaled(pulled, random_scale(rng, pulled), next_seed()));
            out.push_back(gen_pullback(moved, random_shear(rng, moved), next_seed()));
        }
    }
    for (const auto& c : out) check_ground_truth(c);
    return out;
}

std::vector<CorpusEntry> write_corpus(const std::filesystem::path& dir,
                                      const std::vector<VeroneseCurve>& curves) {
    std::filesystem::create_directories(dir);
    std::vector<CorpusEntry> index;
    std::set<std::string> used;
    for (const auto& c : curves) {
        if (!c.manifest()) throw PreconditionError("corpus curve carries no manifest");
        const GroundTruth& g = *c.manifest();
        CorpusEntry e;
        e.family = g.generator;
        e.k = c.k();
        e.n = c.n();
        e.seed = g.seed;
        e.name = g.generator + "_k" + std::to_string(c.k()) + "_n" + std::to_string(c.n()) +
                 "_s" + std::to_string(g.seed);
        if (!used.insert(e.name).second)
            throw StructuralError("duplicate corpus entry name '" + e.name + "'");
        e.curve_file = e.name + ".curve.json";
        e.manifest_file = e.name + ".manifest.json";
        const Json cj = curve_to_json(c);
        const Json mj = manifest_to_json(g);
        e.curve_hash = json_hash(cj);
        e.manifest_hash = json_hash(mj);
        write_json_file(dir / e.curve_file, cj);
        write_json_file(dir / e.manifest_file, mj);
        index.push_back(std::move(e));
    }
    Json doc;
    doc["count"] = index.size();
    Json entries = Json::array();
    for (const auto& e : index) {
        Json row;
        row["name"] = e.name;
        row["family"] = e.family;
        row["k"] = e.k;
        row["n"] = e.n;
        row["seed"] = e.seed;
        row["curve_file"] = e.curve_file;
        row["manifest_file"] = e.manifest_file;
        row["curve_hash"] = e.curve_hash;
        row["manifest_hash"] = e.manifest_hash;
        entries.push_back(std::move(row));
    }
    doc["entries"] = std::move(entries);
    write_json_file(dir / "index.json", doc);
    return index;
}

} // namespace vweb
