#include "vweb/poly.hpp"

#include <cctype>
#include <sstream>

#include "vweb/error.hpp"

namespace vweb {

namespace {

void require_exps(const ChartPtr& chart, const Monomial& exps) {
    if (!chart) throw StructuralError("polynomial without a chart");
    if (exps.size() != chart->dim())
        throw StructuralError("exponent vector length " + std::to_string(exps.size()) +
                              " does not match chart dimension " + std::to_string(chart->dim()));
}

} // namespace

Poly Poly::constant(ChartPtr chart, Rat value) {
    Poly p(std::move(chart));
    if (value != 0) p.terms_.emplace(Monomial(p.chart_->dim(), 0), std::move(value));
    return p;
}

Poly Poly::variable(const ChartPtr& chart, std::size_t index) {
    if (!chart || index >= chart->dim())
        throw StructuralError("variable index out of range");
    Monomial m(chart->dim(), 0);
    m[index] = 1;
    return monomial(chart, std::move(m), Rat(1));
}

Poly Poly::monomial(ChartPtr chart, Monomial exps, Rat coeff) {
    require_exps(chart, exps);
    Poly p(std::move(chart));
    if (coeff != 0) p.terms_.emplace(std::move(exps), std::move(coeff));
    return p;
}

bool Poly::is_constant() const noexcept {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && monomial_degree(terms_.begin()->first) == 0;
}

Rat Poly::constant_value() const {
    Monomial m(chart_ ? chart_->dim() : 0, 0);
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

long Poly::total_degree() const noexcept {
    if (terms_.empty()) return -1;
    // grlex order puts the highest total degree last
    return static_cast<long>(monomial_degree(terms_.rbegin()->first));
}

Rat Poly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

const std::pair<const Monomial, Rat>& Poly::leading_term() const {
    if (terms_.empty()) throw PreconditionError("leading term of zero polynomial");
    return *terms_.rbegin();
}

void Poly::add_term(const Monomial& exps, const Rat& coeff) {
    require_exps(chart_, exps);
    if (coeff == 0) return;
    auto [it, inserted] = terms_.emplace(exps, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r(chart_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    require_same_chart(chart_, o.chart_, "poly add");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    require_same_chart(chart_, o.chart_, "poly sub");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    require_same_chart(a.chart_, b.chart_, "poly mul");
    Poly r(a.chart_);
    const std::size_t dim = a.chart_->dim();
    Monomial m(dim);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < dim; ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Poly& Poly::operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
}

Poly& Poly::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

bool Poly::operator==(const Poly& o) const {
    return same_chart(chart_, o.chart_) && terms_ == o.terms_;
}

Rat Poly::eval(std::span<const Rat> point) const {
    if (!chart_) throw StructuralError("eval of null polynomial");
    if (point.size() != chart_->dim())
        throw PreconditionError("eval point has wrong dimension");
    Rat acc(0);
    for (const auto& [m, c] : terms_) {
        Rat t = c;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) t *= rat_pow(point[i], m[i]);
        acc += t;
    }
    return acc;
}

Poly Poly::partial(std::size_t var) const {
    if (!chart_ || var >= chart_->dim())
        throw PreconditionError("partial: variable index out of range");
    Poly r(chart_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        Monomial d = m;
        d[var] -= 1;
        r.add_term(d, c * Rat(m[var]));
    }
    return r;
}

Poly Poly::subst(const ChartPtr& target, std::span<const Poly> images) const {
    if (!chart_) throw StructuralError("subst of null polynomial");
    if (images.size() != chart_->dim())
        throw PreconditionError("subst: expected one image per variable");
    for (const auto& img : images)
        require_same_chart(target, img.chart(), "subst image");

    // lazily growing power tables, pows[i][e] = images[i]^e
    std::vector<std::vector<Poly>> pows(images.size());
    auto power = [&](std::size_t i, std::uint32_t e) -> const Poly& {
        auto& tab = pows[i];
        if (tab.empty()) tab.push_back(Poly::constant(target, Rat(1)));
        while (tab.size() <= e) tab.push_back(tab.back() * images[i]);
        return tab[e];
    };

    Poly r(target);
    for (const auto& [m, c] : terms_) {
        Poly t = Poly::constant(target, c);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) t *= power(i, m[i]);
        r += t;
    }
    return r;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        const bool has_vars = monomial_degree(m) != 0;
        if (!has_vars || a != 1) out << rat_str(a);
        bool star = !has_vars || a != 1;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (star) out << "*";
            star = true;
            out << chart_->vars[i];
            if (m[i] > 1) out << "^" << m[i];
        }
    }
    return out.str();
}

std::pair<Poly, Poly> complex_split(const Poly& p, const ChartPtr& doubled) {
    if (!p.chart()) throw StructuralError("complex_split of null polynomial");
    const std::size_t m = p.chart()->dim();
    if (!doubled || doubled->dim() != 2 * m)
        throw StructuralError("complex_split: target is not a doubled chart");

    struct CPair {
        Poly re, im;
    };
    auto cmul = [](const CPair& a, const CPair& b) {
        return CPair{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    };

    // pows[i][e] = (x_i + i y_i)^e
    std::vector<std::vector<CPair>> pows(m);
    auto power = [&](std::size_t i, std::uint32_t e) -> const CPair& {
        auto& tab = pows[i];
        if (tab.empty()) {
            tab.push_back({Poly::constant(doubled, Rat(1)), Poly::zero(doubled)});
            tab.push_back({Poly::variable(doubled, i), Poly::variable(doubled, m + i)});
        }
        while (tab.size() <= e) tab.push_back(cmul(tab.back(), tab[1]));
        return tab[e];
    };

    CPair acc{Poly::zero(doubled), Poly::zero(doubled)};
    for (const auto& [mono, c] : p.terms()) {
        CPair t{Poly::constant(doubled, c), Poly::zero(doubled)};
        for (std::size_t i = 0; i < mono.size(); ++i)
            if (mono[i] != 0) t = cmul(t, power(i, mono[i]));
        acc.re += t.re;
        acc.im += t.im;
    }
    return {std::move(acc.re), std::move(acc.im)};
}

namespace {

// Recursive-descent state for poly_parse.
struct ExprParser {
    const ChartPtr& chart;
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("polynomial expression: " + what + " at position " +
                         std::to_string(pos) + " in '" + std::string(text) + "'");
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }

    Rat number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string num(text.substr(start, pos - start));
        if (eat('/')) {
            skip_ws();
            std::size_t dstart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            if (pos == dstart) fail("expected a denominator");
            num += "/" + std::string(text.substr(dstart, pos - dstart));
        }
        return rat_parse(num);
    }

    Poly name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size()) {
            const char c = text[pos];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
                ++pos;
            else
                break;
        }
        const std::string word(text.substr(start, pos - start));
        for (std::size_t i = 0; i < chart->dim(); ++i)
            if (chart->vars[i] == word) return Poly::variable(chart, i);
        fail("unknown variable '" + word + "'");
    }

    Poly atom() {
        const char c = peek();
        if (c == '(') {
            ++pos;
            Poly inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return Poly::constant(chart, number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail(c ? std::string("unexpected '") + c + "'" : std::string("unexpected end of input"));
    }

    Poly factor() {
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        Poly base = atom();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            if (pos == start) fail("expected an exponent");
            unsigned long e = std::stoul(std::string(text.substr(start, pos - start)));
            if (e > 64) fail("exponent too large");
            Poly out = Poly::constant(chart, Rat(1));
            for (unsigned long i = 0; i < e; ++i) out *= base;
            return out;
        }
        return base;
    }

    Poly term() {
        Poly out = factor();
        while (eat('*')) out *= factor();
        return out;
    }

    Poly expr() {
        Poly out = term();
        for (;;) {
            if (eat('+'))
                out += term();
            else if (eat('-'))
                out -= term();
            else
                return out;
        }
    }
};

} // namespace

Poly poly_parse(const ChartPtr& chart, std::string_view text) {
    if (!chart) throw StructuralError("poly_parse without a chart");
    ExprParser p{chart, text};
    Poly out = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return out;
}

} // namespace vweb
