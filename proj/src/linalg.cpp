#include "vweb/linalg.hpp"

#include <algorithm>

#include "vweb/error.hpp"

namespace vweb {

int rat_rank(RatMat m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    for (const auto& row : m)
        if (row.size() != cols) throw PreconditionError("rat_rank: ragged matrix");
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t p = row;
        while (p < m.size() && m[p][col] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[row], m[p]);
        for (std::size_t i = row + 1; i < m.size(); ++i) {
            if (m[i][col] == 0) continue;
            const Rat f = m[i][col] / m[row][col];
            for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
    }
    return static_cast<int>(row);
}

Poly divexact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw PreconditionError("divexact: division by zero polynomial");
    require_same_chart(a.chart(), b.chart(), "divexact");
    Poly q(a.chart());
    Poly r = a;
    const auto& [lbm, lbc] = b.leading_term();
    const std::size_t dim = a.chart()->dim();
    while (!r.is_zero()) {
        const auto& [lrm, lrc] = r.leading_term();
        Monomial qm(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (lrm[i] < lbm[i]) throw Error("divexact: inexact division");
            qm[i] = lrm[i] - lbm[i];
        }
        const Rat qc = lrc / lbc;
        Poly t = Poly::monomial(a.chart(), std::move(qm), qc);
        q += t;
        r -= t * b;
    }
    return q;
}

namespace {

struct Echelon {
    PolyMat u;                        // pivot rows in elimination order
    std::vector<std::size_t> colperm; // pivot columns first, in pivot order
    std::size_t rank = 0;
};

// Forward Bareiss elimination.  Every division by the previous pivot is
// exact (Sylvester identity); divexact enforces it.  Without a point the
// pivot walks the columns in order and takes the fewest-terms entry.
// With a point, full pivoting prefers entries nonvanishing there, so the
// pivots (hence the back-substitution denominators) stay invertible in
// the local ring at the point whenever the pointwise rank matches the
// generic one.
Echelon bareiss_forward(PolyMat m, const std::vector<Rat>* local_point) {
    Echelon e;
    if (m.empty()) return e;
    const std::size_t cols = m[0].size();
    ChartPtr chart;
    for (const auto& row : m) {
        if (row.size() != cols) throw PreconditionError("bareiss: ragged matrix");
        for (const auto& p : row) {
            if (!chart) chart = p.chart();
            require_same_chart(chart, p.chart(), "bareiss");
        }
    }
    e.colperm.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) e.colperm[j] = j;

    Poly prev = Poly::constant(chart, Rat(1));
    std::size_t row = 0;
    while (row < m.size() && row < cols) {
        std::size_t bi = m.size(), bj = cols;
        if (local_point == nullptr) {
            // first column with a nonzero entry, fewest-terms row
            for (std::size_t jj = row; jj < cols && bj == cols; ++jj) {
                const std::size_t col = e.colperm[jj];
                for (std::size_t i = row; i < m.size(); ++i) {
                    if (m[i][col].is_zero()) continue;
                    if (bi == m.size() ||
                        m[i][col].term_count() < m[bi][col].term_count()) {
                        bi = i;
                        bj = jj;
                    }
                }
            }
        } else {
            bool best_unit = false;
            std::size_t best_terms = 0;
            for (std::size_t jj = row; jj < cols; ++jj) {
                const std::size_t col = e.colperm[jj];
                for (std::size_t i = row; i < m.size(); ++i) {
                    if (m[i][col].is_zero()) continue;
                    const bool unit = m[i][col].eval(*local_point) != 0;
                    const std::size_t terms = m[i][col].term_count();
                    if (bi == m.size() || (unit && !best_unit) ||
                        (unit == best_unit && terms < best_terms)) {
                        bi = i;
                        bj = jj;
                        best_unit = unit;
                        best_terms = terms;
                    }
                }
            }
        }
        if (bi == m.size()) break;

        std::swap(m[row], m[bi]);
        std::swap(e.colperm[row], e.colperm[bj]);
        const std::size_t pc = e.colperm[row];
        const Poly piv = m[row][pc];
        for (std::size_t i = row + 1; i < m.size(); ++i) {
            for (std::size_t jj = row + 1; jj < cols; ++jj) {
                const std::size_t j = e.colperm[jj];
                m[i][j] = divexact(piv * m[i][j] - m[i][pc] * m[row][j], prev);
            }
            m[i][pc] = Poly::zero(chart);
        }
        prev = piv;
        ++row;
    }
    e.rank = row;
    m.resize(row, PolyRow{});
    e.u = std::move(m);
    return e;
}

// Polynomial fraction with no reduction; only used transiently during
// back substitution.
struct PFrac {
    Poly num, den;

    bool is_zero() const { return num.is_zero(); }
};

PFrac pf_mul(const PFrac& a, const PFrac& b) {
    return {a.num * b.num, a.den * b.den};
}

PFrac pf_add(const PFrac& a, const PFrac& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return {a.num * b.den + b.num * a.den, a.den * b.den};
}

PolyMat kernel_impl(const PolyMat& m, const std::vector<Rat>* local_point) {
    if (m.empty()) throw PreconditionError("poly_kernel: empty matrix");
    const std::size_t cols = m[0].size();
    ChartPtr chart = m[0].empty() ? ChartPtr{} : m[0][0].chart();
    if (!chart) throw PreconditionError("poly_kernel: matrix with no columns");
    Echelon e = bareiss_forward(m, local_point);
    const std::size_t rank = e.rank;
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t k = 0; k < rank; ++k) is_pivot[e.colperm[k]] = true;

    const Poly one = Poly::constant(chart, Rat(1));
    PolyMat basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<PFrac> x(cols, PFrac{Poly::zero(chart), one});
        x[f] = {one, one};
        for (std::size_t k = rank; k-- > 0;) {
            const std::size_t pc = e.colperm[k];
            PFrac acc{Poly::zero(chart), one};
            for (std::size_t jj = k + 1; jj < cols; ++jj) {
                const std::size_t j = e.colperm[jj];
                if (e.u[k][j].is_zero() || x[j].is_zero()) continue;
                acc = pf_add(acc, pf_mul({e.u[k][j], one}, x[j]));
            }
            x[pc] = {-acc.num, acc.den * e.u[k][pc]};
        }
        // clear denominators: multiply through by the product of them all
        PolyRow v(cols, Poly::zero(chart));
        Poly all = one;
        for (const auto& xf : x)
            if (!xf.is_zero()) all *= xf.den;
        for (std::size_t j = 0; j < cols; ++j) {
            if (x[j].is_zero()) continue;
            v[j] = x[j].num * divexact(all, x[j].den);
        }
        // normalize: unit leading coefficient on the first nonzero entry
        for (const auto& entry : v) {
            if (entry.is_zero()) continue;
            const Rat lead = entry.leading_term().second;
            for (auto& q : v) q *= Rat(1) / lead;
            break;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace

int poly_rank(PolyMat m) {
    return static_cast<int>(bareiss_forward(std::move(m), nullptr).rank);
}

PolyMat poly_kernel(const PolyMat& m) { return kernel_impl(m, nullptr); }

PolyMat poly_kernel(const PolyMat& m, std::span<const Rat> local_point) {
    const std::vector<Rat> pt(local_point.begin(), local_point.end());
    return kernel_impl(m, &pt);
}

} // namespace vweb
