#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "crlab/poly.hpp"
#include "crlab/ratfun.hpp"

namespace crlab {

template <class T>
class Mat {
public:
    Mat() = default;
    Mat(size_t rows, size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = one();
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    Mat submatrix(const std::vector<size_t>& ri, const std::vector<size_t>& ci) const {
        Mat out(ri.size(), ci.size());
        for (size_t i = 0; i < ri.size(); ++i)
            for (size_t j = 0; j < ci.size(); ++j) out(i, j) = (*this)(ri[i], ci[j]);
        return out;
    }

    Mat with_column(size_t j, const std::vector<T>& col) const {
        Mat out = *this;
        for (size_t i = 0; i < rows_; ++i) out(i, j) = col[i];
        return out;
    }

    static T one() { return scalar_one(static_cast<T*>(nullptr)); }

private:
    static GaussianRational scalar_one(GaussianRational*) { return GaussianRational(1); }
    static Rational scalar_one(Rational*) { return Rational(1); }
    static Poly scalar_one(Poly*) { return Poly::constant(GaussianRational(1)); }
    static RatFun scalar_one(RatFun*) { return RatFun::constant(GaussianRational(1)); }

    size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using QMat = Mat<GaussianRational>;
using PolyMat = Mat<Poly>;

inline bool entry_is_zero(const GaussianRational& x) { return x.is_zero(); }
inline bool entry_is_zero(const Rational& x) { return x == 0; }
inline bool entry_is_zero(const Poly& x) { return x.is_zero(); }
inline bool entry_is_zero(const RatFun& x) { return x.is_zero(); }

inline GaussianRational exact_div(const GaussianRational& a, const GaussianRational& b) { return a / b; }
inline Rational exact_div(const Rational& a, const Rational& b) { return a / b; }
inline Poly exact_div(const Poly& a, const Poly& b) { return divide_exact(a, b); }
inline RatFun exact_div(const RatFun& a, const RatFun& b) { return a / b; }

inline GaussianRational coeff_neg_one(GaussianRational*) { return GaussianRational(-1); }
inline Rational coeff_neg_one(Rational*) { return Rational(-1); }
inline Poly coeff_neg_one(Poly*) { return Poly::constant(GaussianRational(-1)); }
inline RatFun coeff_neg_one(RatFun*) { return RatFun::constant(GaussianRational(-1)); }

// Fraction-free Gaussian elimination. Every intermediate division is exact in
// the coefficient ring, so the routine works for polynomial entries without
// leaving the ring. Pivots are the leading principal minors of the permuted
// matrix; the determinant of a square input is the last pivot (give or take
// the permutation sign).
template <class T>
struct BareissResult {
    size_t rank = 0;
    int sign = 1;          // permutation sign accumulated by pivot swaps
    std::vector<T> pivots; // pivot after each elimination step
    T det{};               // signed determinant; valid for square inputs only
};

template <class T>
BareissResult<T> bareiss_reduce(Mat<T> m) {
    BareissResult<T> out;
    const size_t rows = m.rows(), cols = m.cols();
    T prev = Mat<T>::one();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = rows;
        for (size_t i = r; i < rows; ++i) {
            if (!entry_is_zero(m(i, c))) {
                pr = i;
                break;
            }
        }
        if (pr == rows) continue;
        if (pr != r) {
            for (size_t j = 0; j < cols; ++j) std::swap(m(pr, j), m(r, j));
            out.sign = -out.sign;
        }
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = 0; j < cols; ++j) {
                if (j == c) continue;
                m(i, j) = exact_div(m(r, c) * m(i, j) - m(i, c) * m(r, j), prev);
            }
            m(i, c) = T{};
        }
        prev = m(r, c);
        out.pivots.push_back(prev);
        ++r;
    }
    out.rank = r;
    if (rows == cols) {
        if (r < rows) {
            out.det = T{};
        } else {
            out.det = out.pivots.back();
            if (out.sign < 0) out.det = out.det * coeff_neg_one(static_cast<T*>(nullptr));
        }
    }
    return out;
}

template <class T>
T det_bareiss(const Mat<T>& m) {
    if (m.rows() != m.cols()) throw internal_error("determinant of a non-square matrix");
    if (m.rows() == 0) return Mat<T>::one();
    return bareiss_reduce(m).det;
}

// Plain cofactor expansion along the first row; exponential, used as an
// independent oracle for small sizes in tests.
template <class T>
T det_cofactor(const Mat<T>& m) {
    if (m.rows() != m.cols()) throw internal_error("determinant of a non-square matrix");
    const size_t n = m.rows();
    if (n == 0) return Mat<T>::one();
    if (n == 1) return m(0, 0);
    T acc{};
    std::vector<size_t> rows;
    for (size_t i = 1; i < n; ++i) rows.push_back(i);
    for (size_t j = 0; j < n; ++j) {
        if (entry_is_zero(m(0, j))) continue;
        std::vector<size_t> cols;
        for (size_t k = 0; k < n; ++k)
            if (k != j) cols.push_back(k);
        T minor = det_cofactor(m.submatrix(rows, cols));
        T term = m(0, j) * minor;
        if (j % 2 == 1) term = term * coeff_neg_one(static_cast<T*>(nullptr));
        acc = acc + term;
    }
    return acc;
}

template <class T>
size_t rank_of(const Mat<T>& m) {
    return bareiss_reduce(m).rank;
}

// Solves A x = b over a field; reports inconsistency. A may be rectangular.
template <class T>
struct LinearSolution {
    bool consistent = false;
    std::vector<T> x;  // one solution (free variables set to zero)
    size_t rank = 0;
};

template <class T>
LinearSolution<T> solve_linear(Mat<T> a, std::vector<T> b) {
    if (a.rows() != b.size()) throw internal_error("solve_linear: shape mismatch");
    const size_t rows = a.rows(), cols = a.cols();
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = rows;
        for (size_t i = r; i < rows; ++i)
            if (!entry_is_zero(a(i, c))) {
                pr = i;
                break;
            }
        if (pr == rows) continue;
        if (pr != r) {
            for (size_t j = 0; j < cols; ++j) std::swap(a(pr, j), a(r, j));
            std::swap(b[pr], b[r]);
        }
        T inv_pivot = exact_div(Mat<T>::one(), a(r, c));
        for (size_t j = 0; j < cols; ++j) a(r, j) = a(r, j) * inv_pivot;
        b[r] = b[r] * inv_pivot;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || entry_is_zero(a(i, c))) continue;
            T f = a(i, c);
            for (size_t j = 0; j < cols; ++j) a(i, j) = a(i, j) - f * a(r, j);
            b[i] = b[i] - f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    LinearSolution<T> out;
    out.rank = r;
    for (size_t i = r; i < rows; ++i)
        if (!entry_is_zero(b[i])) return out;  // inconsistent
    out.consistent = true;
    out.x.assign(cols, T{});
    for (size_t k = 0; k < pivot_col.size(); ++k) out.x[pivot_col[k]] = b[k];
    return out;
}

// Basis of the right kernel {x : A x = 0} over a field, via reduced row
// echelon form; one basis vector per free column.
template <class T>
std::vector<std::vector<T>> kernel_basis(Mat<T> a) {
    const size_t rows = a.rows(), cols = a.cols();
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = rows;
        for (size_t i = r; i < rows; ++i)
            if (!entry_is_zero(a(i, c))) {
                pr = i;
                break;
            }
        if (pr == rows) continue;
        if (pr != r)
            for (size_t j = 0; j < cols; ++j) std::swap(a(pr, j), a(r, j));
        T inv_pivot = exact_div(Mat<T>::one(), a(r, c));
        for (size_t j = 0; j < cols; ++j) a(r, j) = a(r, j) * inv_pivot;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || entry_is_zero(a(i, c))) continue;
            T f = a(i, c);
            for (size_t j = 0; j < cols; ++j) a(i, j) = a(i, j) - f * a(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<std::vector<T>> basis;
    for (size_t c = 0; c < cols; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), c) != pivot_col.end()) continue;
        std::vector<T> v(cols, T{});
        v[c] = Mat<T>::one();
        for (size_t k = 0; k < pivot_col.size(); ++k)
            v[pivot_col[k]] = T{} - a(k, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

QMat mat_mul(const QMat& a, const QMat& b);
QMat conj_transpose(const QMat& a);
bool is_hermitian(const QMat& h);

// Inertia (positive, negative, zero eigenvalue counts) of an exact Hermitian
// matrix, computed by congruence: real diagonal pivots contribute their sign;
// when the active diagonal is entirely zero, an off-diagonal entry yields a
// hyperbolic two-by-two block contributing one of each sign. Congruence
// preserves inertia, so no eigenvalue computation is needed.
struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;

    friend bool operator==(const Inertia&, const Inertia&) = default;
};

Inertia hermitian_inertia(QMat h);

}  // namespace crlab
