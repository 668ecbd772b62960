#include "vweb/binform.hpp"

#include <algorithm>

#include "vweb/error.hpp"

namespace vweb {

namespace {

// Dense univariate polynomial, little-endian coefficients, no trailing
// zeros (empty = zero).
using UniPoly = std::vector<Rat>;

void uni_trim(UniPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

UniPoly uni_rem(UniPoly a, const UniPoly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        const Rat f = a.back() / b.back();
        const std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        a.pop_back();
        uni_trim(a);
    }
    return a;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
    uni_trim(a);
    uni_trim(b);
    while (!b.empty()) {
        UniPoly r = uni_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rat lead = a.back();
        for (auto& x : a) x /= lead;
    }
    return a;
}

// Divides by (u - r) in place; remainder must be zero.
void uni_deflate(UniPoly& p, const Rat& r) {
    UniPoly q(p.size() - 1, Rat(0));
    Rat carry(0);
    for (std::size_t i = p.size(); i-- > 1;) {
        carry = p[i] + carry * r;
        q[i - 1] = carry;
    }
    if (p[0] + carry * r != 0) throw Error("uni_deflate: not a root");
    p = std::move(q);
}

bool uni_is_root(const UniPoly& p, const Rat& r) {
    Rat acc(0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * r + p[i];
    return acc == 0;
}

std::vector<Int> divisors(Int n) {
    if (n < 0) n = -n;
    std::vector<std::pair<Int, unsigned>> factors;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        factors.emplace_back(p, e);
    }
    if (n > 1) factors.emplace_back(n, 1);
    std::vector<Int> out{Int(1)};
    for (const auto& [p, e] : factors) {
        const std::size_t base = out.size();
        Int pw(1);
        for (unsigned i = 1; i <= e; ++i) {
            pw *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pw);
        }
    }
    return out;
}

// All rational roots of p (nonzero constant term required), fully
// deflating each; afterwards p has no rational roots.
std::vector<Rat> uni_rational_roots(UniPoly& p) {
    std::vector<Rat> roots;
    if (p.size() <= 1) return roots;
    // integer-clear the coefficients
    Int den(1);
    for (const auto& x : p) {
        Int d = x.get_den();
        Int g;
        mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
        den = den / g * d;
    }
    std::vector<Int> z;
    z.reserve(p.size());
    for (const auto& x : p) {
        const Rat v = x * den;
        z.push_back(v.get_num());
    }
    const std::vector<Int> nums = divisors(z.front());
    const std::vector<Int> dens = divisors(z.back());
    for (const auto& a : nums) {
        for (const auto& b : dens) {
            for (int sign : {1, -1}) {
                Rat cand(sign * a, b);
                cand.canonicalize();
                if (std::find(roots.begin(), roots.end(), cand) != roots.end()) continue;
                while (uni_is_root(p, cand)) {
                    roots.push_back(cand);
                    uni_deflate(p, cand);
                    if (p.size() <= 1) break;
                }
                if (p.size() <= 1) break;
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

} // namespace

BinForm::BinForm(std::vector<Rat> coeffs) : c(std::move(coeffs)) {
    if (c.empty()) throw StructuralError("binary form needs at least one coefficient");
}

BinForm BinForm::zero(unsigned degree) {
    return BinForm(std::vector<Rat>(degree + 1, Rat(0)));
}

bool BinForm::is_zero() const {
    for (const auto& x : c)
        if (x != 0) return false;
    return true;
}

Rat BinForm::eval(const Rat& s, const Rat& t) const {
    const unsigned d = degree();
    Rat acc(0);
    for (unsigned j = 0; j <= d; ++j)
        acc += c[j] * rat_pow(s, d - j) * rat_pow(t, j);
    return acc;
}

namespace {

// Splits f = s^a * t^b * core(t/s) with core of nonzero constant and
// leading coefficients; returns (a, b, core as univariate in u = t/s).
struct SplitForm {
    unsigned s_mult = 0, t_mult = 0;
    UniPoly core;
};

SplitForm split(const BinForm& f) {
    SplitForm out;
    const auto first = std::find_if(f.c.begin(), f.c.end(), [](const Rat& x) { return x != 0; });
    const auto last = std::find_if(f.c.rbegin(), f.c.rend(), [](const Rat& x) { return x != 0; });
    const std::size_t lo = static_cast<std::size_t>(first - f.c.begin());
    const std::size_t hi = f.c.size() - 1 - static_cast<std::size_t>(last - f.c.rbegin());
    out.t_mult = static_cast<unsigned>(lo);
    out.s_mult = static_cast<unsigned>(f.c.size() - 1 - hi);
    out.core.assign(f.c.begin() + static_cast<long>(lo), f.c.begin() + static_cast<long>(hi) + 1);
    return out;
}

} // namespace

BinForm binform_gcd(const BinForm& a, const BinForm& b) {
    if (a.is_zero() && b.is_zero()) return BinForm::zero(0);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const SplitForm sa = split(a), sb = split(b);
    const unsigned s_mult = std::min(sa.s_mult, sb.s_mult);
    const unsigned t_mult = std::min(sa.t_mult, sb.t_mult);
    UniPoly g = uni_gcd(sa.core, sb.core);
    // homogenize g back, then append the common s and t powers
    std::vector<Rat> coeffs(t_mult, Rat(0));
    coeffs.insert(coeffs.end(), g.begin(), g.end());
    coeffs.insert(coeffs.end(), s_mult, Rat(0));
    return BinForm(std::move(coeffs));
}

BinRoots binform_rational_roots(const BinForm& f) {
    if (f.is_zero())
        throw PreconditionError("rational roots of the identically zero binary form");
    BinRoots out;
    SplitForm sf = split(f);
    if (sf.s_mult > 0) out.rational.push_back(ProjPoint::infinity());
    std::vector<Rat> finite;
    if (sf.t_mult > 0) finite.push_back(Rat(0));
    UniPoly core = sf.core;
    for (auto& r : uni_rational_roots(core)) finite.push_back(std::move(r));
    std::sort(finite.begin(), finite.end());
    for (auto& r : finite) out.rational.push_back(ProjPoint::finite(std::move(r)));
    out.residual_degree = core.empty() ? 0 : static_cast<unsigned>(core.size() - 1);
    return out;
}

} // namespace vweb
