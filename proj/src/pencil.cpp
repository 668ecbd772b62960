#include "vweb/pencil.hpp"

#include "vweb/error.hpp"

namespace vweb {

ProjPoint ProjPoint::from_coords(const Rat& s, const Rat& t) {
    if (s == 0 && t == 0) throw PreconditionError("projective point (0, 0)");
    if (s == 0) return infinity();
    return finite(t / s);
}

ProjPoint ProjPoint::parse(std::string_view text) {
    if (text == "inf") return infinity();
    return finite(rat_parse(text));
}

const Rat& ProjPoint::value() const {
    if (is_infinity()) throw PreconditionError("affine value of the point at infinity");
    return t;
}

std::string ProjPoint::str() const {
    return is_infinity() ? "inf" : rat_str(t);
}

bool all_distinct(const std::vector<ProjPoint>& points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) return false;
    return true;
}

Moebius Moebius::of(Rat a, Rat b, Rat c, Rat d) {
    Moebius g{std::move(a), std::move(b), std::move(c), std::move(d)};
    if (g.det() == 0) throw PreconditionError("singular parameter substitution");
    return g;
}

Moebius Moebius::compose(const Moebius& then) const {
    // (then . this) as matrices acting on column (s, t)
    return Moebius::of(then.a * a + then.b * c, then.a * b + then.b * d,
                       then.c * a + then.d * c, then.c * b + then.d * d);
}

ProjPoint Moebius::apply(const ProjPoint& p) const {
    return ProjPoint::from_coords(a * p.s + b * p.t, c * p.s + d * p.t);
}

FormPencil::FormPencil(ChartPtr chart, unsigned form_degree, std::vector<DForm> coeffs)
    : chart_(std::move(chart)), form_degree_(form_degree), coeffs_(std::move(coeffs)) {
    if (!chart_) throw StructuralError("pencil without a chart");
    if (coeffs_.empty()) throw StructuralError("pencil needs at least one coefficient form");
    for (const auto& w : coeffs_) {
        require_same_chart(chart_, w.chart(), "pencil coefficient");
        if (w.degree() != form_degree_)
            throw StructuralError("pencil coefficient has wrong form degree");
    }
}

FormPencil FormPencil::zero(ChartPtr chart, unsigned form_degree, unsigned param_degree) {
    std::vector<DForm> coeffs(param_degree + 1, DForm::zero(chart, form_degree));
    return FormPencil(std::move(chart), form_degree, std::move(coeffs));
}

bool FormPencil::is_zero() const noexcept {
    for (const auto& w : coeffs_)
        if (!w.is_zero()) return false;
    return true;
}

DForm FormPencil::eval(const ProjPoint& p) const {
    const unsigned n = param_degree();
    DForm acc = DForm::zero(chart_, form_degree_);
    for (unsigned j = 0; j <= n; ++j) {
        if (coeffs_[j].is_zero()) continue;
        const Rat w = rat_pow(p.s, n - j) * rat_pow(p.t, j);
        if (w == 0) continue;
        acc += w * coeffs_[j];
    }
    return acc;
}

FormPencil FormPencil::operator-() const {
    std::vector<DForm> coeffs;
    coeffs.reserve(coeffs_.size());
    for (const auto& w : coeffs_) coeffs.push_back(-w);
    return FormPencil(chart_, form_degree_, std::move(coeffs));
}

FormPencil& FormPencil::operator+=(const FormPencil& o) {
    require_same_chart(chart_, o.chart_, "pencil add");
    if (form_degree_ != o.form_degree_ || coeffs_.size() != o.coeffs_.size())
        throw StructuralError("pencil add: mixed degrees");
    for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
    return *this;
}

FormPencil operator*(const Poly& f, const FormPencil& p) {
    std::vector<DForm> coeffs;
    coeffs.reserve(p.coeffs_.size());
    for (const auto& w : p.coeffs_) coeffs.push_back(f * w);
    return FormPencil(p.chart_, p.form_degree_, std::move(coeffs));
}

FormPencil operator*(const Rat& c, const FormPencil& p) {
    std::vector<DForm> coeffs;
    coeffs.reserve(p.coeffs_.size());
    for (const auto& w : p.coeffs_) coeffs.push_back(c * w);
    return FormPencil(p.chart_, p.form_degree_, std::move(coeffs));
}

bool FormPencil::operator==(const FormPencil& o) const {
    return form_degree_ == o.form_degree_ && same_chart(chart_, o.chart_) &&
           coeffs_ == o.coeffs_;
}

FormPencil pencil_d(const FormPencil& p) {
    std::vector<DForm> coeffs;
    coeffs.reserve(p.coeffs().size());
    for (const auto& w : p.coeffs()) coeffs.push_back(exterior_d(w));
    return FormPencil(p.chart(), p.form_degree() + 1, std::move(coeffs));
}

FormPencil pencil_wedge(const FormPencil& a, const FormPencil& b) {
    require_same_chart(a.chart(), b.chart(), "pencil wedge");
    const unsigned na = a.param_degree(), nb = b.param_degree();
    const unsigned deg = a.form_degree() + b.form_degree();
    const unsigned capped = std::min<unsigned>(deg, static_cast<unsigned>(a.chart()->dim()));
    std::vector<DForm> coeffs(na + nb + 1, DForm::zero(a.chart(), capped));
    for (unsigned i = 0; i <= na; ++i) {
        if (a.coeff(i).is_zero()) continue;
        for (unsigned j = 0; j <= nb; ++j) {
            if (b.coeff(j).is_zero()) continue;
            coeffs[i + j] += wedge(a.coeff(i), b.coeff(j));
        }
    }
    return FormPencil(a.chart(), capped, std::move(coeffs));
}

FormPencil moebius_transform(const FormPencil& p, const Moebius& g) {
    const unsigned n = p.param_degree();
    std::vector<DForm> out(n + 1, DForm::zero(p.chart(), p.form_degree()));
    // (a s + b t)^(n-j) (c s + d t)^j expanded into s^(n-i) t^i
    for (unsigned j = 0; j <= n; ++j) {
        const DForm& w = p.coeff(j);
        if (w.is_zero()) continue;
        for (unsigned u = 0; u <= n - j; ++u) {
            for (unsigned v = 0; v <= j; ++v) {
                const unsigned i = u + v;
                Rat coeff = rat_binomial(n - j, u) * rat_binomial(j, v) *
                            rat_pow(g.a, n - j - u) * rat_pow(g.b, u) * rat_pow(g.c, j - v) *
                            rat_pow(g.d, v);
                if (coeff == 0) continue;
                out[i] += coeff * w;
            }
        }
    }
    return FormPencil(p.chart(), p.form_degree(), std::move(out));
}

bool pencil_is_zero(const FormPencil& p) {
    return p.is_zero();
}

} // namespace vweb
