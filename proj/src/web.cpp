#include "vweb/web.hpp"

#include <algorithm>
#include <chrono>

#include "vweb/binform.hpp"
#include "vweb/error.hpp"
#include "vweb/rng.hpp"

namespace vweb {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

} // namespace

VeroneseCurve::VeroneseCurve(Unchecked, unsigned k, unsigned n, ChartPtr chart,
                             std::vector<FormPencil> pencils, std::vector<Rat> basepoint,
                             std::optional<GroundTruth> manifest)
    : k_(k), n_(n), chart_(std::move(chart)), pencils_(std::move(pencils)),
      basepoint_(std::move(basepoint)), manifest_(std::move(manifest)) {
    if (k_ == 0 || n_ == 0) throw StructuralError("curve needs k >= 1 and n >= 1");
    if (!chart_ || chart_->dim() != m())
        throw StructuralError("curve chart dimension must be k(n+1)");
    if (pencils_.size() != k_) throw StructuralError("curve needs exactly k pencils");
    for (const auto& p : pencils_) {
        require_same_chart(chart_, p.chart(), "curve pencil");
        if (p.form_degree() != 1) throw StructuralError("curve pencils must hold 1-forms");
        if (p.param_degree() != n_)
            throw StructuralError("curve pencils must have parameter degree n");
    }
    if (basepoint_.size() != m()) throw StructuralError("basepoint has wrong dimension");
}

VeroneseCurve::VeroneseCurve(unsigned k, unsigned n, ChartPtr chart,
                             std::vector<FormPencil> pencils, std::vector<Rat> basepoint,
                             std::optional<GroundTruth> manifest)
    : VeroneseCurve(Unchecked{}, k, n, std::move(chart), std::move(pencils),
                    std::move(basepoint), std::move(manifest)) {
    if (!coframe_at(basepoint_))
        throw InvalidCurveError("coefficient forms do not form a coframe at the basepoint");
}

VeroneseCurve VeroneseCurve::make_unchecked(unsigned k, unsigned n, ChartPtr chart,
                                            std::vector<FormPencil> pencils,
                                            std::vector<Rat> basepoint,
                                            std::optional<GroundTruth> manifest) {
    return VeroneseCurve(Unchecked{}, k, n, std::move(chart), std::move(pencils),
                         std::move(basepoint), std::move(manifest));
}

std::vector<DForm> VeroneseCurve::coefficient_forms() const {
    std::vector<DForm> forms;
    forms.reserve(m());
    for (const auto& p : pencils_)
        for (const auto& w : p.coeffs()) forms.push_back(w);
    return forms;
}

bool VeroneseCurve::coframe_at(std::span<const Rat> point) const {
    const auto forms = coefficient_forms();
    return rank_of_1forms_at_point(forms, point) == static_cast<int>(m());
}

bool validate_coframe(const VeroneseCurve& c, std::span<const Rat> point) {
    return c.coframe_at(point);
}

FormPencil integrability_pencil(const VeroneseCurve& c, unsigned i) {
    if (i >= c.k()) throw PreconditionError("integrability_pencil: pencil index out of range");
    FormPencil acc = pencil_d(c.pencil(i));
    for (const auto& p : c.pencils()) acc = pencil_wedge(acc, p);
    return acc;
}

bool check_at(const VeroneseCurve& c, const ProjPoint& q) {
    // evaluate first: d and wedge commute with evaluation at a fixed
    // parameter, so this equals evaluating the obstruction pencils
    std::vector<DForm> at_q;
    at_q.reserve(c.k());
    for (const auto& p : c.pencils()) at_q.push_back(p.eval(q));
    for (const auto& form : at_q) {
        DForm obstruction = exterior_d(form);
        for (const auto& other : at_q) obstruction = wedge(obstruction, other);
        if (!obstruction.is_zero()) return false;
    }
    return true;
}

std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::IntegrableEverywhere: return "integrable-everywhere";
        case Verdict::IntegrableAtListedPointsOnly: return "integrable-at-listed-points-only";
        case Verdict::NotIntegrableAtQueriedPoints: return "not-integrable-at-queried-points";
        case Verdict::ProbableIntegrable: return "probable-integrable";
    }
    return "unknown";
}

namespace {

std::vector<FormPencil> all_obstructions(const VeroneseCurve& c) {
    std::vector<FormPencil> out;
    out.reserve(c.k());
    for (unsigned i = 0; i < c.k(); ++i) out.push_back(integrability_pencil(c, i));
    return out;
}

std::size_t max_terms(const std::vector<FormPencil>& obs) {
    std::size_t m = 0;
    for (const auto& p : obs)
        for (const auto& w : p.coeffs())
            for (const auto& [idx, poly] : w.terms()) m = std::max(m, poly.term_count());
    return m;
}

// Verdict for pointwise modes once at least one point failed.
Verdict pointwise_verdict(const std::vector<PointCheck>& points) {
    const bool any_ok =
        std::any_of(points.begin(), points.end(), [](const PointCheck& p) { return p.ok; });
    return any_ok ? Verdict::IntegrableAtListedPointsOnly
                  : Verdict::NotIntegrableAtQueriedPoints;
}

IntegrabilityReport pointwise_check(const VeroneseCurve& c, const std::vector<ProjPoint>& pts,
                                    std::size_t min_points, const char* mode,
                                    const char* pass_basis, bool theorem_based) {
    const auto start = Clock::now();
    if (pts.size() < min_points)
        throw PreconditionError(std::string(mode) + " check needs at least " +
                                std::to_string(min_points) + " points, got " +
                                std::to_string(pts.size()));
    if (!all_distinct(pts))
        throw PreconditionError(std::string(mode) + " check: duplicate parameter points");
    IntegrabilityReport r;
    r.mode = mode;
    r.pencil_param_degree = c.n() * (c.k() + 1);
    bool all_ok = true;
    for (const auto& q : pts) {
        const bool ok = check_at(c, q);
        all_ok = all_ok && ok;
        r.points.push_back({q, ok});
    }
    if (all_ok) {
        r.verdict = Verdict::IntegrableEverywhere;
        r.basis = pass_basis;
        r.theorem_based = theorem_based;
    } else {
        r.verdict = pointwise_verdict(r.points);
        r.basis = "pointwise-evaluation";
    }
    r.elapsed_ms = ms_since(start);
    return r;
}

} // namespace

IntegrabilityReport check_full(const VeroneseCurve& c) {
    const auto start = Clock::now();
    IntegrabilityReport r;
    r.mode = "full";
    r.basis = "coefficient-identity";
    r.pencil_param_degree = c.n() * (c.k() + 1);
    const auto obs = all_obstructions(c);
    r.max_coeff_terms = max_terms(obs);
    bool all_zero = true;
    for (unsigned i = 0; i < obs.size(); ++i) {
        if (obs[i].is_zero()) continue;
        all_zero = false;
        // first nonvanishing coefficient form, lowest parameter index
        for (unsigned d = 0; d <= obs[i].param_degree(); ++d) {
            const DForm& w = obs[i].coeff(d);
            if (w.is_zero()) continue;
            const auto& [idx, poly] = *w.terms().begin();
            r.witnesses.push_back({i, d, idx, poly, {}, {}});
            break;
        }
    }
    r.verdict = all_zero ? Verdict::IntegrableEverywhere : Verdict::NotIntegrableAtQueriedPoints;
    r.elapsed_ms = ms_since(start);
    return r;
}

IntegrabilityReport check_sparse(const VeroneseCurve& c, const std::vector<ProjPoint>& pts) {
    return pointwise_check(c, pts, c.n() + 3, "sparse", "n-plus-3-point-criterion", true);
}

IntegrabilityReport check_naive(const VeroneseCurve& c, const std::vector<ProjPoint>& pts) {
    return pointwise_check(c, pts, c.n() * (c.k() + 1) + 1, "naive", "degree-bound-sampling",
                           false);
}

IntegrabilityReport randomized_check(const VeroneseCurve& c, unsigned samples,
                                     std::uint64_t seed) {
    const auto start = Clock::now();
    if (samples == 0) throw PreconditionError("randomized check needs samples >= 1");
    IntegrabilityReport r;
    r.mode = "randomized";
    r.pencil_param_degree = c.n() * (c.k() + 1);
    const auto obs = all_obstructions(c);
    r.max_coeff_terms = max_terms(obs);

    unsigned degree = 1;
    for (const auto& p : obs)
        for (const auto& w : p.coeffs())
            for (const auto& [idx, poly] : w.terms())
                degree = std::max(degree, static_cast<unsigned>(poly.total_degree()));
    const unsigned long grid = 2UL * degree * samples;
    r.sz = SZInfo{degree, grid, samples};

    DetRng rng(seed);
    const std::size_t dim = c.chart()->dim();
    for (unsigned s = 0; s < samples; ++s) {
        std::vector<Rat> pt;
        pt.reserve(dim);
        for (std::size_t j = 0; j < dim; ++j)
            pt.push_back(Rat(static_cast<unsigned long>(rng.below(grid))));
        for (unsigned i = 0; i < obs.size(); ++i) {
            for (unsigned d = 0; d <= obs[i].param_degree(); ++d) {
                for (const auto& [idx, poly] : obs[i].coeff(d).terms()) {
                    const Rat v = poly.eval(pt);
                    if (v != 0) {
                        r.witnesses.push_back({i, d, idx, poly, pt, v});
                        r.verdict = Verdict::NotIntegrableAtQueriedPoints;
                        r.basis = "schwartz-zippel";
                        r.elapsed_ms = ms_since(start);
                        return r;
                    }
                }
            }
        }
    }
    r.verdict = Verdict::ProbableIntegrable;
    r.basis = "schwartz-zippel";
    r.elapsed_ms = ms_since(start);
    return r;
}

Locus integrability_locus(const VeroneseCurve& c) {
    const auto obs = all_obstructions(c);
    const bool all_zero =
        std::all_of(obs.begin(), obs.end(), [](const FormPencil& p) { return p.is_zero(); });
    Locus loc;
    if (all_zero) {
        loc.all = true;
        return loc;
    }
    // every (covector tuple, monomial) slot across the parameter
    // coefficients yields one binary form in (s, t)
    std::optional<BinForm> gcd;
    for (const auto& p : obs) {
        if (p.is_zero()) continue;
        const unsigned deg = p.param_degree();
        std::map<std::pair<IndexTuple, Monomial>, BinForm> slots;
        for (unsigned d = 0; d <= deg; ++d) {
            for (const auto& [idx, poly] : p.coeff(d).terms()) {
                for (const auto& [mono, coeff] : poly.terms()) {
                    auto key = std::make_pair(idx, mono);
                    auto it = slots.find(key);
                    if (it == slots.end())
                        it = slots.emplace(key, BinForm::zero(deg)).first;
                    it->second.c[d] = coeff;
                }
            }
        }
        for (auto& [key, form] : slots) {
            if (form.is_zero()) continue;
            gcd = gcd ? binform_gcd(*gcd, form) : form;
        }
    }
    if (!gcd || gcd->is_zero()) {
        // cannot happen: some pencil was nonzero
        throw Error("integrability_locus: inconsistent obstruction state");
    }
    BinRoots roots = binform_rational_roots(*gcd);
    loc.points = std::move(roots.rational);
    loc.residual_degree = roots.residual_degree;
    loc.residual = roots.residual_degree > 0;
    return loc;
}

bool general_position_check(const VeroneseCurve& c, const std::vector<ProjPoint>& points,
                            std::span<const Rat> base) {
    if (!all_distinct(points))
        throw PreconditionError("general_position_check: duplicate parameter points");
    std::vector<DForm> covectors;
    covectors.reserve(points.size() * c.k());
    for (const auto& q : points)
        for (const auto& p : c.pencils()) covectors.push_back(p.eval(q));
    const int expect = static_cast<int>(
        std::min<std::size_t>(points.size() * c.k(), c.m()));
    return rank_of_1forms_at_point(covectors, base) == expect;
}

bool infinity_consistency(const VeroneseCurve& c) {
    for (unsigned i = 0; i < c.k(); ++i) {
        const FormPencil obs = integrability_pencil(c, i);
        if (obs.eval(ProjPoint::infinity()) != obs.coeffs().back()) return false;
    }
    return true;
}

} // namespace vweb
