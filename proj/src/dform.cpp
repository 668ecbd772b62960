#include "vweb/dform.hpp"

#include <algorithm>
#include <sstream>

#include "vweb/error.hpp"
#include "vweb/linalg.hpp"

namespace vweb {

namespace {

// Sorts idx ascending, returns the sign of the permutation, or 0 if an
// index repeats.
int sort_with_sign(IndexTuple& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && idx[j - 1] > idx[j]) {
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
            --j;
        }
        if (j > 0 && idx[j - 1] == idx[j]) return 0;
    }
    return sign;
}

} // namespace

DForm::DForm(ChartPtr chart, unsigned degree) : chart_(std::move(chart)), degree_(degree) {
    if (!chart_) throw StructuralError("form without a chart");
    if (degree_ > chart_->dim())
        throw StructuralError("form degree exceeds chart dimension");
}

DForm DForm::from_poly(const Poly& p) {
    DForm w(p.chart(), 0);
    if (!p.is_zero()) w.terms_.emplace(IndexTuple{}, p);
    return w;
}

DForm DForm::covector(const ChartPtr& chart, std::size_t i) {
    DForm w(chart, 1);
    if (i >= chart->dim()) throw StructuralError("covector index out of range");
    w.terms_.emplace(IndexTuple{static_cast<std::uint32_t>(i)},
                     Poly::constant(chart, Rat(1)));
    return w;
}

DForm DForm::one_form(const ChartPtr& chart, std::span<const Poly> coeffs) {
    if (coeffs.size() != chart->dim())
        throw StructuralError("one_form: expected one coefficient per variable");
    DForm w(chart, 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        w.add_term({static_cast<std::uint32_t>(i)}, coeffs[i]);
    return w;
}

Poly DForm::coeff(const IndexTuple& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? Poly::zero(chart_) : it->second;
}

void DForm::add_term(IndexTuple idx, Poly coeff) {
    if (idx.size() != degree_)
        throw StructuralError("index tuple length does not match form degree");
    require_same_chart(chart_, coeff.chart(), "form term");
    for (auto i : idx)
        if (i >= chart_->dim()) throw StructuralError("covector index out of range");
    const int sign = sort_with_sign(idx);
    if (sign == 0 || coeff.is_zero()) return;
    if (sign < 0) coeff = -coeff;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_.emplace(std::move(idx), std::move(coeff));
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DForm DForm::operator-() const {
    DForm r(chart_, degree_);
    for (const auto& [idx, p] : terms_) r.terms_.emplace(idx, -p);
    return r;
}

DForm& DForm::operator+=(const DForm& o) {
    require_same_chart(chart_, o.chart_, "form add");
    if (degree_ != o.degree_) throw StructuralError("form add: mixed degrees");
    for (const auto& [idx, p] : o.terms_) {
        auto [it, inserted] = terms_.emplace(idx, p);
        if (!inserted) {
            it->second += p;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

DForm& DForm::operator-=(const DForm& o) {
    return *this += -o;
}

DForm operator*(const Poly& f, const DForm& w) {
    require_same_chart(f.chart(), w.chart(), "form scale");
    DForm r(w.chart(), w.degree());
    for (const auto& [idx, p] : w.terms()) {
        Poly q = f * p;
        if (!q.is_zero()) r.terms_.emplace(idx, std::move(q));
    }
    return r;
}

DForm operator*(const Rat& c, const DForm& w) {
    DForm r(w.chart(), w.degree());
    if (c == 0) return r;
    for (const auto& [idx, p] : w.terms()) r.terms_.emplace(idx, c * p);
    return r;
}

bool DForm::operator==(const DForm& o) const {
    return degree_ == o.degree_ && same_chart(chart_, o.chart_) && terms_ == o.terms_;
}

std::vector<Poly> DForm::one_form_coeffs() const {
    if (degree_ != 1) throw PreconditionError("one_form_coeffs: form degree is not 1");
    std::vector<Poly> out(chart_->dim(), Poly::zero(chart_));
    for (const auto& [idx, p] : terms_) out[idx[0]] = p;
    return out;
}

std::string DForm::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [idx, p] : terms_) {
        if (!first) out << " + ";
        first = false;
        out << "(" << p.str() << ")";
        for (std::size_t i = 0; i < idx.size(); ++i)
            out << (i == 0 ? " d" : "^d") << chart_->vars[idx[i]];
    }
    return out.str();
}

DForm wedge(const DForm& a, const DForm& b) {
    require_same_chart(a.chart(), b.chart(), "wedge");
    const unsigned deg = a.degree() + b.degree();
    if (deg > a.chart()->dim()) return DForm::zero(a.chart(), a.chart()->dim());
    DForm r(a.chart(), deg);
    IndexTuple merged;
    for (const auto& [ia, pa] : a.terms()) {
        for (const auto& [ib, pb] : b.terms()) {
            // merge the two increasing tuples, counting crossings
            merged.clear();
            std::size_t i = 0, j = 0;
            int sign = 1;
            bool dup = false;
            while (i < ia.size() && j < ib.size()) {
                if (ia[i] == ib[j]) {
                    dup = true;
                    break;
                }
                if (ia[i] < ib[j]) {
                    merged.push_back(ia[i++]);
                } else {
                    // ib[j] jumps over the remaining entries of ia
                    if ((ia.size() - i) % 2 != 0) sign = -sign;
                    merged.push_back(ib[j++]);
                }
            }
            if (dup) continue;
            for (; i < ia.size(); ++i) merged.push_back(ia[i]);
            for (; j < ib.size(); ++j) merged.push_back(ib[j]);
            Poly prod = pa * pb;
            if (prod.is_zero()) continue;
            if (sign < 0) prod = -prod;
            auto it = r.terms_.find(merged);
            if (it == r.terms_.end()) {
                r.terms_.emplace(merged, std::move(prod));
            } else {
                it->second += prod;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
    }
    return r;
}

DForm exterior_d(const DForm& w) {
    const auto& chart = w.chart();
    if (w.degree() + 1 > chart->dim()) return DForm::zero(chart, chart->dim());
    DForm r(chart, w.degree() + 1);
    IndexTuple idx;
    for (const auto& [tuple, p] : w.terms()) {
        for (std::size_t v = 0; v < chart->dim(); ++v) {
            Poly dp = p.partial(v);
            if (dp.is_zero()) continue;
            idx.clear();
            idx.push_back(static_cast<std::uint32_t>(v));
            idx.insert(idx.end(), tuple.begin(), tuple.end());
            r.add_term(idx, std::move(dp));
        }
    }
    return r;
}

DForm contract(const DForm& w, const VectorField& v) {
    require_same_chart(w.chart(), v.chart(), "contract");
    if (w.degree() == 0) throw PreconditionError("contract: cannot contract a 0-form");
    DForm r(w.chart(), w.degree() - 1);
    IndexTuple rest;
    for (const auto& [tuple, p] : w.terms()) {
        for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
            const Poly& comp = v.component(tuple[pos]);
            if (comp.is_zero()) continue;
            Poly q = p * comp;
            if (pos % 2 != 0) q = -q;
            rest.clear();
            for (std::size_t i = 0; i < tuple.size(); ++i)
                if (i != pos) rest.push_back(tuple[i]);
            r.add_term(rest, std::move(q));
        }
    }
    return r;
}

VectorField::VectorField(ChartPtr chart, std::vector<Poly> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
    if (!chart_) throw StructuralError("vector field without a chart");
    if (comps_.size() != chart_->dim())
        throw StructuralError("vector field needs one component per variable");
    for (const auto& p : comps_) require_same_chart(chart_, p.chart(), "vector field component");
}

VectorField VectorField::zero(const ChartPtr& chart) {
    return VectorField(chart, std::vector<Poly>(chart->dim(), Poly::zero(chart)));
}

VectorField VectorField::basis(const ChartPtr& chart, std::size_t i) {
    if (i >= chart->dim()) throw StructuralError("basis field index out of range");
    std::vector<Poly> comps(chart->dim(), Poly::zero(chart));
    comps[i] = Poly::constant(chart, Rat(1));
    return VectorField(chart, std::move(comps));
}

bool VectorField::is_zero() const noexcept {
    for (const auto& p : comps_)
        if (!p.is_zero()) return false;
    return true;
}

VectorField VectorField::operator-() const {
    std::vector<Poly> comps;
    comps.reserve(comps_.size());
    for (const auto& p : comps_) comps.push_back(-p);
    return VectorField(chart_, std::move(comps));
}

VectorField& VectorField::operator+=(const VectorField& o) {
    require_same_chart(chart_, o.chart_, "field add");
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
    return *this;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    r += -b;
    return r;
}

VectorField operator*(const Poly& f, const VectorField& v) {
    std::vector<Poly> comps;
    comps.reserve(v.comps_.size());
    for (const auto& p : v.comps_) comps.push_back(f * p);
    return VectorField(v.chart_, std::move(comps));
}

VectorField operator*(const Rat& c, const VectorField& v) {
    std::vector<Poly> comps;
    comps.reserve(v.comps_.size());
    for (const auto& p : v.comps_) comps.push_back(p * c);
    return VectorField(v.chart_, std::move(comps));
}

bool VectorField::operator==(const VectorField& o) const {
    return same_chart(chart_, o.chart_) && comps_ == o.comps_;
}

std::string VectorField::str() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (comps_[i].is_zero()) continue;
        if (!first) out << " + ";
        first = false;
        out << "(" << comps_[i].str() << ") d/d" << chart_->vars[i];
    }
    return first ? "0" : out.str();
}

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
    require_same_chart(v.chart(), w.chart(), "lie bracket");
    const auto& chart = v.chart();
    std::vector<Poly> comps(chart->dim(), Poly::zero(chart));
    for (std::size_t k = 0; k < chart->dim(); ++k) {
        for (std::size_t i = 0; i < chart->dim(); ++i) {
            if (!v.component(i).is_zero()) comps[k] += v.component(i) * w.component(k).partial(i);
            if (!w.component(i).is_zero()) comps[k] -= w.component(i) * v.component(k).partial(i);
        }
    }
    return VectorField(chart, std::move(comps));
}

int rank_of_1forms_at_point(std::span<const DForm> forms, std::span<const Rat> point) {
    if (forms.empty()) return 0;
    RatMat rows;
    rows.reserve(forms.size());
    for (const auto& w : forms) {
        require_same_chart(w.chart(), forms.front().chart(), "rank of 1-forms");
        if (w.degree() != 1) throw PreconditionError("rank_of_1forms_at_point: degree must be 1");
        if (point.size() != w.chart()->dim())
            throw PreconditionError("rank_of_1forms_at_point: point has wrong dimension");
        RatRow row(w.chart()->dim(), Rat(0));
        for (const auto& [idx, p] : w.terms()) row[idx[0]] = p.eval(point);
        rows.push_back(std::move(row));
    }
    return rat_rank(std::move(rows));
}

int rank_of_fields_at_point(std::span<const VectorField> fields, std::span<const Rat> point) {
    if (fields.empty()) return 0;
    RatMat rows;
    rows.reserve(fields.size());
    for (const auto& v : fields) {
        require_same_chart(v.chart(), fields.front().chart(), "rank of fields");
        if (point.size() != v.chart()->dim())
            throw PreconditionError("rank_of_fields_at_point: point has wrong dimension");
        RatRow row;
        row.reserve(v.components().size());
        for (const auto& p : v.components()) row.push_back(p.eval(point));
        rows.push_back(std::move(row));
    }
    return rat_rank(std::move(rows));
}

} // namespace vweb
