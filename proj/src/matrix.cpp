#include "crlab/matrix.hpp"

#include <algorithm>

namespace crlab {

QMat mat_mul(const QMat& a, const QMat& b) {
    if (a.cols() != b.rows()) throw internal_error("mat_mul: shape mismatch");
    QMat out(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

QMat conj_transpose(const QMat& a) {
    QMat out(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) out(j, i) = conj(a(i, j));
    return out;
}

bool is_hermitian(const QMat& h) {
    if (h.rows() != h.cols()) return false;
    for (size_t i = 0; i < h.rows(); ++i)
        for (size_t j = i; j < h.cols(); ++j)
            if (!(h(i, j) == conj(h(j, i)))) return false;
    return true;
}

Inertia hermitian_inertia(QMat h) {
    if (!is_hermitian(h)) throw input_error("inertia requested for a non-Hermitian matrix");
    const size_t n = h.rows();
    std::vector<bool> active(n, true);
    Inertia out;

    auto schur_update = [&](const std::vector<size_t>& p, const QMat& binv) {
        std::vector<size_t> rest;
        for (size_t m = 0; m < n; ++m)
            if (active[m] && std::find(p.begin(), p.end(), m) == p.end()) rest.push_back(m);
        const size_t k = p.size();
        // D' = D - C * Binv * C^H with C(m, alpha) = h(m, p[alpha]).
        QMat cb(rest.size(), k);
        for (size_t mi = 0; mi < rest.size(); ++mi)
            for (size_t b2 = 0; b2 < k; ++b2)
                for (size_t a2 = 0; a2 < k; ++a2) cb(mi, b2) += h(rest[mi], p[a2]) * binv(a2, b2);
        QMat upd(rest.size(), rest.size());
        for (size_t mi = 0; mi < rest.size(); ++mi)
            for (size_t pj = 0; pj < rest.size(); ++pj)
                for (size_t b2 = 0; b2 < k; ++b2)
                    upd(mi, pj) += cb(mi, b2) * conj(h(rest[pj], p[b2]));
        for (size_t mi = 0; mi < rest.size(); ++mi)
            for (size_t pj = 0; pj < rest.size(); ++pj)
                h(rest[mi], rest[pj]) -= upd(mi, pj);
        for (size_t idx : p) active[idx] = false;
    };

    size_t remaining = n;
    while (remaining > 0) {
        size_t diag = n;
        for (size_t k = 0; k < n; ++k)
            if (active[k] && !h(k, k).is_zero()) {
                diag = k;
                break;
            }
        if (diag < n) {
            const Rational d = h(diag, diag).re();  // Hermitian diagonal is real
            if (d > 0)
                ++out.positive;
            else
                ++out.negative;
            QMat binv(1, 1);
            binv(0, 0) = GaussianRational(Rational(1) / d);
            schur_update({diag}, binv);
            --remaining;
            continue;
        }
        size_t rk = n, rl = n;
        for (size_t k = 0; k < n && rk == n; ++k) {
            if (!active[k]) continue;
            for (size_t l = k + 1; l < n; ++l)
                if (active[l] && !h(k, l).is_zero()) {
                    rk = k;
                    rl = l;
                    break;
                }
        }
        if (rk == n) {
            out.zero += static_cast<int>(remaining);
            break;
        }
        // Hyperbolic block [[0, b],[conj(b), 0]]: one positive and one
        // negative eigenvalue; its inverse is [[0, 1/conj(b)],[1/b, 0]].
        const GaussianRational b = h(rk, rl);
        ++out.positive;
        ++out.negative;
        QMat binv(2, 2);
        binv(0, 1) = GaussianRational(1) / conj(b);
        binv(1, 0) = GaussianRational(1) / b;
        schur_update({rk, rl}, binv);
        remaining -= 2;
    }
    return out;
}

}  // namespace crlab
