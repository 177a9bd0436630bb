#include "crlab/detid.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace crlab {

namespace {

// Validates a 1-based index set against [1, limit], rejects duplicates, and
// returns the sorted 0-based version.
std::vector<size_t> sorted_zero_based(const std::vector<int>& idx, size_t limit,
                                      const char* what) {
    std::set<int> seen;
    std::vector<size_t> out;
    out.reserve(idx.size());
    for (int v : idx) {
        if (v < 1 || static_cast<size_t>(v) > limit) {
            std::ostringstream os;
            os << what << " index " << v << " out of range 1.." << limit;
            throw input_error(os.str());
        }
        if (!seen.insert(v).second) {
            std::ostringstream os;
            os << "duplicate " << what << " index " << v;
            throw input_error(os.str());
        }
        out.push_back(static_cast<size_t>(v - 1));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// The two elements of {1..n} missing from a sorted 0-based set of size n-2.
std::pair<size_t, size_t> complement_pair(const std::vector<size_t>& set0,
                                          size_t n) {
    std::vector<size_t> missing;
    size_t at = 0;
    for (size_t v = 0; v < n; ++v) {
        if (at < set0.size() && set0[at] == v) {
            ++at;
        } else {
            missing.push_back(v);
        }
    }
    if (missing.size() != 2) throw internal_error("complement_pair: bad sizes");
    return {missing[0], missing[1]};
}

GaussianRational minor_det0(const QMat& b, std::vector<size_t> rows0,
                            std::vector<size_t> cols0) {
    std::sort(rows0.begin(), rows0.end());
    std::sort(cols0.begin(), cols0.end());
    return det_bareiss(b.submatrix(rows0, cols0));
}

std::vector<size_t> with_extra(std::vector<size_t> set0, size_t extra) {
    set0.push_back(extra);
    std::sort(set0.begin(), set0.end());
    return set0;
}

}  // namespace

GaussianRational minor_det(const QMat& b, std::vector<int> rows,
                           std::vector<int> cols) {
    if (rows.size() != cols.size())
        throw input_error("minor needs equally many rows and columns");
    auto rows0 = sorted_zero_based(rows, b.rows(), "row");
    auto cols0 = sorted_zero_based(cols, b.cols(), "column");
    return det_bareiss(b.submatrix(rows0, cols0));
}

IdentityCheck bordered_minor_identity(const QMat& b, std::vector<int> i_set,
                                      std::vector<int> j_set) {
    const size_t n = b.rows();
    if (b.cols() != n) throw input_error("bordered-minor identity needs a square matrix");
    if (n < 3) throw input_error("bordered-minor identity needs size at least 3");
    if (i_set.size() != n - 2 || j_set.size() != n - 2)
        throw input_error("bordered-minor identity needs index sets of size n-2");
    // The sets live in {1..n-1}; the last row and column always border.
    auto i0 = sorted_zero_based(i_set, n - 1, "row");
    auto j0 = sorted_zero_based(j_set, n - 1, "column");
    auto [r1, r2] = complement_pair(i0, n);
    auto [c1, c2] = complement_pair(j0, n);

    QMat block(2, 2);
    block(0, 0) = minor_det0(b, with_extra(i0, r1), with_extra(j0, c1));
    block(0, 1) = minor_det0(b, with_extra(i0, r1), with_extra(j0, c2));
    block(1, 0) = minor_det0(b, with_extra(i0, r2), with_extra(j0, c1));
    block(1, 1) = minor_det0(b, with_extra(i0, r2), with_extra(j0, c2));

    IdentityCheck out;
    out.lhs = det_bareiss(block);
    out.rhs = minor_det0(b, i0, j0) * det_bareiss(b);
    out.equal = (out.lhs == out.rhs);
    return out;
}

QMat condense(const QMat& c) {
    const size_t p = c.rows();
    if (c.cols() != p) throw input_error("condensation needs a square matrix");
    if (p < 2) throw input_error("condensation needs size at least 2");
    QMat out(p - 1, p - 1);
    const GaussianRational corner = c(0, 0);
    for (size_t i = 0; i + 1 < p; ++i)
        for (size_t j = 0; j + 1 < p; ++j)
            out(i, j) = corner * c(i + 1, j + 1) - c(0, j + 1) * c(i + 1, 0);
    return out;
}

IdentityCheck condensation_identity(const QMat& c) {
    const size_t p = c.rows();
    if (c.cols() != p) throw input_error("condensation needs a square matrix");
    if (p < 3) throw input_error("condensation identity needs size at least 3");
    GaussianRational corner_pow = GaussianRational(1);
    for (size_t k = 0; k + 2 < p; ++k) corner_pow = corner_pow * c(0, 0);

    IdentityCheck out;
    out.lhs = corner_pow * det_bareiss(c);
    out.rhs = det_bareiss(condense(c));
    out.equal = (out.lhs == out.rhs);
    return out;
}

std::vector<BorderedDisplay> all_bordered_displays(const QMat& a) {
    if (a.rows() != 3 || a.cols() != 3)
        throw input_error("bordered displays are defined for 3x3 matrices");
    const GaussianRational det_a = det_bareiss(a);
    std::vector<BorderedDisplay> out;
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            BorderedDisplay d;
            d.i = i;
            d.j = j;
            d.check = bordered_minor_identity(a, {i}, {j});
            d.entry_times_det =
                a(static_cast<size_t>(i - 1), static_cast<size_t>(j - 1)) * det_a;
            d.matches_entry_form = (d.check.lhs == d.entry_times_det);
            out.push_back(std::move(d));
        }
    }
    return out;
}

DependenceResult dependence_certificate(const QMat& b,
                                        const std::vector<GaussianRational>& a) {
    const size_t n = b.rows();
    if (b.cols() != n) throw input_error("dependence certificate needs a square matrix");
    if (a.size() != n)
        throw input_error("dependence certificate needs a vector matching the matrix size");
    if (entry_is_zero(det_bareiss(b)))
        throw input_error("dependence certificate needs independent base columns");

    DependenceResult out;
    auto solved = solve_linear(b, a);
    if (!solved.consistent)
        throw internal_error("dependence_certificate: nonsingular solve failed");
    out.coefficients = solved.x;

    for (size_t drop = 0; drop < n; ++drop) {
        QMat bordered(n, n);
        std::vector<int> kept;
        size_t at = 0;
        for (size_t j = 0; j < n; ++j) {
            if (j == drop) continue;
            kept.push_back(static_cast<int>(j + 1));
            for (size_t i = 0; i < n; ++i) bordered(i, at) = b(i, j);
            ++at;
        }
        for (size_t i = 0; i < n; ++i) bordered(i, n - 1) = a[i];
        GaussianRational d = det_bareiss(bordered);
        if (!entry_is_zero(d)) {
            out.is_zero = false;
            out.witness_columns = std::move(kept);
            out.witness_det = d;
            return out;
        }
    }

    // Every bordered determinant vanished, so each expansion coefficient of
    // `a` against the columns of `b` is zero and `a` itself must be zero.
    out.is_zero = true;
    for (const auto& x : out.coefficients)
        if (!entry_is_zero(x))
            throw internal_error("dependence_certificate: zero verdict with nonzero coefficients");
    for (const auto& v : a)
        if (!entry_is_zero(v))
            throw internal_error("dependence_certificate: zero verdict with nonzero vector");
    return out;
}

}  // namespace crlab
